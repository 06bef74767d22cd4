"""Exact computations with fusion of modules over quantum affinizations."""
