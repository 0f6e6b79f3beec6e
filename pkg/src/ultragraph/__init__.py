"""Exact decision procedures for ultragraph C*-algebra properties."""
