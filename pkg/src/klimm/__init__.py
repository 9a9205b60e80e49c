"""Exact Kazhdan-Lusztig immanants, Bruhat interval graphs and k-positivity."""

__version__ = "0.1.0"
