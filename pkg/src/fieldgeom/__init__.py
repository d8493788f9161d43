"""Exact algebraic combinatorial geometry of rational function field extensions."""
