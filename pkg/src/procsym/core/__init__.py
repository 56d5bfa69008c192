"""Core package for procsym components."""
