"""Finite-model verification of rigidity for positive unit sphere isometries."""
