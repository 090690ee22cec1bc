"""
Triple Linking — Engine Configuration

Limits, conventions and search parameters shared by every module.
Environment variables override the scan settings.
"""

import os

# Sign convention for reading a linking form off a framing matrix.
#   paper: +Λ⁻¹ (framing +3 gives self-linking +1/3)
#   lemma: −Λ⁻¹ (the intersection-form sign)
CONVENTIONS = ("paper", "lemma")
DEFAULT_CONVENTION = "paper"

# Groups up to this order are checked for nondegeneracy element by element.
BRUTE_FORCE_ORDER_LIMIT = 10**6

# Splitting search runs only when (Z/p)^2n has at most this many n-dim subspaces.
HANTZSCHE_CANDIDATE_LIMIT = 10**7

# RREF bases materialized at once while walking a shape class.
SHAPE_CHUNK = 2**16


# The surgery family: 6 components, Z/3 coefficients, 3-dim Lagrangians,
# one coefficient per column triple.
FAMILY_PRIME = 3
FAMILY_RANK = 6
FAMILY_DIM = 3
DET_VECTOR_LENGTH = 20


# Universal-vanishing verification modes.
VERIFY_MODES = ("rank_reduced", "exhaustive")
DEFAULT_VERIFY_MODE = "rank_reduced"

# High-half indices handed to one worker per exhaustive-scan task.
EXHAUSTIVE_CHUNK = int(os.environ.get("TRIPLE_LINKING_CHUNK", 243))

DEFAULT_THREADS = int(os.environ.get("TRIPLE_LINKING_THREADS", os.cpu_count() or 1))

# Seed for the random scan strategy.
DEFAULT_SEED = 0

LOG_LEVEL = os.environ.get("TRIPLE_LINKING_LOG_LEVEL", "WARNING")
