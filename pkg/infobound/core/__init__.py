"""Core numerics: linear algebra kernel, entropies and random sampling."""
