"""Information bounds for general quantum measurements - numerics library and CLI."""

__version__ = "1.0.0"
__description__ = "Mutual information, Holevo quantities and entropy reduction for inefficient measurements"
