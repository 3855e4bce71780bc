"""Shared test matrices.

The larger pairs are known-conjugate production examples; the 5x5 comparison
pair is kept exactly as printed in its source even though the second matrix
fails the determinant sanity check there (see the acceptance suite).
"""

PAIR_4X4 = (
    ((0, 1, 0, 0), (-4, 0, 0, 0), (0, 0, 0, 1), (0, 0, -4, 0)),
    ((0, 1, 4, 0), (-4, 0, 0, -4), (0, 0, 0, 1), (0, 0, -4, 0)),
)

PAIR_10X10 = (
    ((-14, -4, 0, 0, -1, 1, 0, 0, 0, 0),
     (-7, -2, 0, 0, 0, 0, 1, 0, 0, 0),
     (-3, -1, 0, 0, 0, 0, 0, 1, 0, 0),
     (0, 0, -1, 0, 0, 0, 0, 0, 1, 0),
     (0, 0, 0, -1, 0, 0, 0, 0, 0, 1),
     (0, 0, 0, 0, 0, -14, -4, 0, 0, -1),
     (0, 0, 0, 0, 0, -7, -2, 0, 0, 0),
     (0, 0, 0, 0, 0, -3, -1, 0, 0, 0),
     (0, 0, 0, 0, 0, 0, 0, -1, 0, 0),
     (0, 0, 0, 0, 0, 0, 0, 0, -1, 0)),
    ((-9, 9, 0, -1, 0, 0, 0, 0, 0, -7),
     (0, 0, 0, -1, 0, 0, 0, 0, 0, 0),
     (-4, 4, 0, 0, 0, 0, 0, 0, 0, -3),
     (0, 0, -1, 0, 0, 0, 0, 0, 0, 0),
     (0, 0, 0, 0, -7, -9, 1, 0, 0, 0),
     (-1, 1, 0, 0, -7, -9, 0, 0, 0, 0),
     (9, -7, 0, 0, 0, 0, 0, 0, 1, 6),
     (0, 0, 1, 0, 3, 4, 0, 0, 0, 0),
     (-9, 8, 0, -1, 0, 0, 0, 1, 0, -7),
     (-9, 8, 0, 0, 0, 0, 0, 0, 0, -7)),
)

_C14 = tuple(
    tuple(1 if j == i + 1 else 0 for j in range(14)) for i in range(13)
) + ((-2, -2, -2, -2, -1, -1, -1, -1, 0, 0, -2, 0, 0, 0),)

PAIR_14X14 = (
    _C14,
    ((-21, -11, 12, 9, 15, 8, -22, -23, 2, 6, 8, -2, 2, -8),
     (32, 17, -22, -10, -18, -14, 28, 35, -5, -6, -13, 4, -1, 13),
     (1, 4, -17, 6, 11, -12, -6, 18, -16, 8, -7, 7, 4, 9),
     (21, 13, -24, -11, -19, -21, 33, 48, -15, -4, -15, 7, -1, 18),
     (14, 8, -16, -2, -2, -11, 10, 23, -9, 0, -9, 5, 0, 9),
     (-1, 8, -14, -3, 13, -9, -2, 21, -18, 6, -7, 8, 0, 9),
     (29, 14, -13, -15, -27, -10, 36, 31, 1, -11, -10, 1, -4, 10),
     (-26, -8, -8, 10, 21, -12, -16, 14, -25, 14, -3, 9, 5, 8),
     (-8, -6, -1, -9, -31, -14, 34, 31, -8, -7, -4, 1, -2, 10),
     (-19, -8, 11, -15, -39, -8, 38, 24, -4, -9, 2, -2, -3, 7),
     (-35, -25, 30, 3, -11, 11, -2, -27, 14, -4, 14, -9, -2, -13),
     (-19, -21, 32, -6, -34, 11, 21, -21, 23, -14, 13, -13, -5, -12),
     (10, 5, 3, 11, 31, 16, -36, -36, 11, 7, 5, -2, 3, -12),
     (12, 7, -7, -13, -27, -7, 30, 24, 2, -11, -5, -1, -5, 6)),
)

CENT_3X3 = ((-5, 8, -5), (4, -7, 5), (1, -2, 2))

CENT_3X3_PRINTED_GENS = (
    ((860, 1206, -975), (603, 1001, -795), (195, 318, -253)),
    ((4, 6, -5), (3, 5, -5), (1, 2, -3)),
    ((-1, 0, 0), (0, -1, 0), (0, 0, -1)),
)

# 5x5 comparison pair, verbatim from the source document.  The second matrix
# has determinant -2578559, so the pair cannot be conjugate as printed; the
# acceptance suite records this honestly.
PAIR_5X5_COMPARISON = (
    ((2, 1, -1, -1, 2),
     (6, -2, 4, 3, 2),
     (10, -5, 4, 5, -13),
     (22, 6, -2, -4, 23),
     (-1, 0, 0, 0, 0)),
    ((85, -89, -167, 22, -2),
     (9480, 9317, 17095, -307, -214),
     (5233, -5146, -9444, 180, 116),
     (1045, -1028, -1887, 38, 23),
     (52, -47, -84, -10, 4)),
)

# 9x9 pair whose orbit blows up (big-orbit graceful-failure fixture)
PAIR_9X9_BIG_ORBIT = (
    ((-3, -1, 3, 0, 0, 0, 0, 0, 0),
     (1, 0, 0, 0, 0, 0, 0, 0, 0),
     (-5, 0, 1, 0, 0, 0, 0, 0, 0),
     (0, 0, 0, -3, -1, 3, 0, 0, 0),
     (0, 0, 0, 1, 0, 0, 0, 0, 0),
     (0, 0, 0, -5, 0, 1, 0, 0, 0),
     (0, 0, 0, 0, 0, 0, -3, -1, 3),
     (0, 0, 0, 0, 0, 0, 1, 0, 0),
     (0, 0, 0, 0, 0, 0, -5, 0, 1)),
    ((13, -15, 16, 24, -16, -7, -35, 15, 0),
     (-3, 44, -40, -71, 62, 28, 157, -76, 16),
     (18, -15, -3, -7, -31, 6, -226, 129, -52),
     (-69, 72, -55, -78, 86, 18, 355, -186, 48),
     (-75, 98, -82, -124, 117, 35, 406, -206, 46),
     (-45, 19, -21, -22, 10, 1, 49, -25, -3),
     (24, -66, 53, 89, -89, -31, -289, 147, -37),
     (30, -78, 61, 102, -104, -35, -348, 178, -45),
     (24, 11, -8, -23, 26, 14, 58, -29, 11)),
)

# 10x10 matrix whose minimal polynomial has a ~10^108 discriminant
MAT_10X10_HUGE_DISC = (
    (6, -8, -4, -2, 3, 8, -2, 3, -1, 7),
    (2, 2, -6, 6, 6, -1, 3, 7, 1, 0),
    (8, -2, -1, 1, 10, -3, -3, -2, -2, 3),
    (1, 10, 1, -10, 3, 5, -5, -10, -7, -6),
    (1, 0, 3, -2, 0, 6, 4, 1, 1, -4),
    (2, -3, 9, 4, -2, -8, -8, 4, 4, -4),
    (5, -1, -4, -7, -8, 8, 1, 3, -6, 10),
    (-6, -2, -7, 5, 10, -8, 6, 3, -8, -6),
    (-7, 10, -5, 4, 2, 3, -7, 7, -8, -3),
    (-1, 1, -3, 0, 2, -9, -6, -1, -6, -6),
)

# nilpotent action with a rank-2 free automorphism kernel (3x3, l = 3)
NILMOD_3X3_Y = ((0, 0, -1), (0, 1, 1), (0, -1, -1))

# Latimer-MacDuffee negative pair: x^2+5, principal vs non-principal class
LM2_A = ((0, 1), (-5, 0))
LM2_B = ((-1, 2), (-3, 1))
