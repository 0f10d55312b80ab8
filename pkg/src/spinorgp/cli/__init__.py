"""Command-line interface for the spinor GP lab."""
