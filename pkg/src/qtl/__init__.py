"""Computational toolkit for 5-class towers of cyclic quartic fields."""
