"""Racks, quandles, Cayley graphs and marking censuses of finite graphs."""

__version__ = "1.0.0"
