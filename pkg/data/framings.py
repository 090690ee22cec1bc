"""
Framing Matrix Fixtures
=======================
Surgery framing matrices shipped with the engine, plus the obstruction
vector and Lagrangian bases of the six-component ±3 family that the
tests and the `--builtin` flag rely on.

Matrix files live in data/matrices/ in the framing text format
(first line n, then n rows of n integers).
"""

from __future__ import annotations

from pathlib import Path

MATRIX_DIR = Path(__file__).resolve().parent / "matrices"

# Framing fixtures
FRAMINGS = {
    "m0": {
        "file": "m0.txt",
        "group": "(Z/3)^6",
        "description": "Six unlinked unknots framed +3,+3,+3,-3,-3,-3; gram diag(1/3,1/3,1/3,2/3,2/3,2/3)",
    },
    "lens_3_1": {
        "file": "lens_3_1.txt",
        "group": "Z/3",
        "description": "L(3,1); order 3 is not a square",
    },
    "hyperbolic_3": {
        "file": "hyperbolic_3.txt",
        "group": "(Z/3)^2",
        "description": "diag(1/3,-1/3); two Lagrangian lines forming one dual pair",
    },
    "definite_3": {
        "file": "definite_3.txt",
        "group": "(Z/3)^2",
        "description": "diag(1/3,1/3); no isotropic lines",
    },
    "a2": {
        "file": "a2.txt",
        "group": "Z/3",
        "description": "Hopf link framed 2,2; self-linking 2/3",
    },
    "identity_3": {
        "file": "identity_3.txt",
        "group": "0",
        "description": "Unimodular framing; trivial group",
    },
}

# ──────────────────────────────────────────────────────────────
# The ±3 family
# ──────────────────────────────────────────────────────────────

# Obstructed coefficient vector, one entry per column triple (signed trits)
WITNESS_V = (-1, -1, 1, 1, 0, 0, 0, 0, 0, 0, -1, -1, -1, 1, 1, 0, 0, 0, 0, 0)

# Lagrangian spanned by x_i + x_{i+3}: basis [I | I]
IDENTITY_SPLIT_ROWS = (
    (1, 0, 0, 1, 0, 0),
    (0, 1, 0, 0, 1, 0),
    (0, 0, 1, 0, 0, 1),
)

# Its minors, column triples in lexicographic order
IDENTITY_SPLIT_DETS = (1, 0, 0, 1, 0, -1, 0, 0, 0, 1, 1, 0, 0, 0, -1, 0, 1, 0, 0, 1)

# A dual pair on which the 3-form of e_1 vanishes identically
E1_VANISHING_PAIR_ROWS = (
    (
        (0, 0, 0, 1, 1, 1),
        (0, 1, -1, 0, 1, -1),
        (1, 1, 1, 0, 0, 0),
    ),
    (
        (0, 0, 0, -1, 1, 1),
        (0, 1, -1, 0, -1, 1),
        (-1, 1, 1, 0, 0, 0),
    ),
)

# Census of the family
M0_COUNTS = {
    "lagrangians": 80,
    "left_block_nonsingular": 48,
    "left_block_singular": 32,
    "dual_pairs": 1080,
}

# ──────────────────────────────────────────────────────────────
# Grope intersection data
# ──────────────────────────────────────────────────────────────

GROPES = [
    {"name": "borromean_clasper", "t": 3, "g": 1, "cy": [1], "dz": [1], "cz": [0], "dy": [0], "value": "1/3"},
    {"name": "genus_two", "t": 2, "g": 2, "cy": [1, 3], "dz": [1, 1], "cz": [2, 0], "dy": [1, 0], "value": "0/1"},
    {"name": "empty", "t": 5, "g": 0, "cy": [], "dz": [], "cz": [], "dy": [], "value": "0/1"},
]


def framing_path(name: str) -> Path:
    """Path of a builtin framing file (KeyError for unknown names)."""
    return MATRIX_DIR / FRAMINGS[name]["file"]


def get_framing(name: str):
    """Parsed IntMatrix for a builtin framing."""
    from triple_linking.linking import load_framing

    return load_framing(framing_path(name))


def get_form(name: str, sign_convention: str = "paper"):
    """Linking form of a builtin framing."""
    from triple_linking.linking import linking_form_from_framing

    _, form = linking_form_from_framing(get_framing(name), sign_convention)
    return form


def get_witness():
    from triple_linking.tripleform import ObstructionVector

    return ObstructionVector(WITNESS_V)


def get_e1_vanishing_pair():
    """The two Lagrangians of the e_1-vanishing dual pair, as canonical subspaces."""
    from triple_linking.isotropic import Subspace

    return tuple(Subspace.span(3, rows) for rows in E1_VANISHING_PAIR_ROWS)


def get_identity_split():
    from triple_linking.isotropic import Subspace

    return Subspace.span(3, IDENTITY_SPLIT_ROWS)


def get_grope(name: str):
    from triple_linking.tripleform import GropeData

    entry = next(g for g in GROPES if g["name"] == name)
    return GropeData(entry["t"], entry["g"], tuple(entry["cy"]), tuple(entry["dz"]),
                     tuple(entry["cz"]), tuple(entry["dy"]))
