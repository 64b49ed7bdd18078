"""Exact Lie point symmetry analysis of the Yang-Mills equations."""
