"""Cayley automatic structures for wreath products ``G wr H`` with H virtually Z."""

__version__ = "0.1.0"
