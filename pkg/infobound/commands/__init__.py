"""CLI verbs: compute, generate and run."""
