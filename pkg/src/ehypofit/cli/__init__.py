"""Command-line interface for ehypofit."""
