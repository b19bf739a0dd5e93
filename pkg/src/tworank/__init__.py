"""Exhaustive/randomized verification engine for finite matrix-group and
projective-plane identities: Sylow-2 constructions with exact involution
censuses, centralizer-index identities, fixed-point counts, and
involution-index bound campaigns."""

__version__ = "0.1.0"
