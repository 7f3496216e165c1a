"""Gray codes for GL(n, q) under elementary row operations."""
