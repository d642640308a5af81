"""Core terms, surface syntax, parsing, name resolution and printing."""
