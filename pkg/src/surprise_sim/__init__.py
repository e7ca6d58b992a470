"""Surprise in two-candidate elections under filter-bubble social graphs."""
