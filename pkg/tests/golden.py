"""Hand-checked reference vectors for two k=10, d=5, l=2 instances over GF(11).

Both instances share the support W; the first demand matrix is
GRS-structured (hence MDS), the second is full rank but not MDS.  Every
value below was verified by independent recomputation (dual-multiplier
products, kernel products, polynomial evaluations, exhaustive subset
sweeps) before being frozen.
"""

Q = 11
K = 10
D = 5
L = 2

# 0-based support; 1-based this is {2, 4, 5, 7, 8}
W = (1, 3, 4, 6, 7)

# --- instance A: MDS demand -------------------------------------------------

V1_MULTIPLIERS = (1, 3, 2, 1, 6)
V1_POINTS = (3, 7, 9, 4, 5)
V1 = [
    [1, 3, 2, 1, 6],
    [3, 10, 7, 4, 8],
]

# dual multipliers of the demand code on the same points
LAMBDA_DUAL = (3, 10, 8, 8, 7)

# one valid kernel basis of V1 (GRS rows scaled by the dual multipliers)
KERNEL = [
    [3, 10, 8, 8, 7],
    [9, 4, 6, 10, 2],
    [5, 6, 10, 7, 10],
]

# extension of the dual code from 5 to 10 columns
EXTRA_MULTIPLIERS = (3, 5, 1, 1, 4)
EXTRA_POINTS = (6, 1, 10, 2, 8)

# canonical placement: W ascending, then the complement ascending (1-based
# it reads 2,4,5,7,8,1,3,6,9,10)
PLACEMENT = (1, 3, 4, 6, 7, 0, 2, 5, 8, 9)

# the placed parity-check of the query code
H = [
    [3, 3, 5, 10, 8, 1, 8, 7, 1, 4],
    [7, 9, 5, 4, 6, 10, 10, 2, 2, 10],
    [9, 5, 5, 6, 10, 1, 7, 10, 4, 3],
]

# multipliers of the full-length query generator
ALPHAS = (10, 7, 3, 5, 4, 9, 2, 1, 9, 9)

G1 = [
    [9, 10, 2, 7, 3, 1, 5, 4, 9, 9],
    [10, 8, 2, 5, 5, 10, 9, 9, 7, 6],
    [5, 2, 2, 2, 1, 1, 3, 1, 3, 4],
    [8, 6, 2, 3, 9, 10, 1, 5, 6, 10],
    [4, 7, 2, 10, 4, 1, 4, 3, 1, 3],
    [2, 10, 2, 4, 3, 10, 5, 4, 2, 2],
    [1, 8, 2, 6, 5, 1, 9, 9, 4, 5],
]

# recovery coefficient vectors: c2 is c1 shifted one slot right
C1 = [8, 1, 8, 9, 6, 1, 0]
C2 = [0, 8, 1, 8, 9, 6, 1]

# V1 spread onto the 10 columns at W
U1 = [
    [0, 1, 0, 3, 2, 0, 1, 6, 0, 0],
    [0, 3, 0, 10, 7, 0, 4, 8, 0, 0],
]

# --- instance B: full-rank but non-MDS demand -------------------------------

V2 = [
    [3, 1, 6, 2, 6],
    [10, 4, 8, 7, 9],
]

U2 = [
    [0, 3, 0, 1, 6, 0, 2, 6, 0, 0],
    [0, 10, 0, 4, 8, 0, 7, 9, 0, 0],
]

# the MDS (GRS) matrix stacked under U2
M2 = [
    [2, 1, 4, 7, 9, 1, 10, 5, 4, 3],
    [6, 5, 3, 5, 3, 6, 10, 6, 10, 6],
    [7, 3, 5, 2, 1, 3, 10, 5, 3, 1],
    [10, 4, 1, 3, 4, 7, 10, 6, 2, 2],
    [8, 9, 9, 10, 5, 9, 10, 5, 5, 4],
]

# a scrambled query equal to some invertible R applied to stack(U2, M2)
G2 = [
    [7, 10, 7, 7, 9, 1, 10, 0, 10, 10],
    [4, 2, 0, 9, 7, 6, 6, 0, 8, 7],
    [7, 2, 6, 7, 10, 2, 9, 4, 8, 4],
    [8, 10, 10, 3, 7, 2, 5, 6, 4, 7],
    [1, 1, 3, 2, 0, 2, 8, 5, 3, 3],
    [7, 2, 9, 6, 9, 5, 5, 8, 6, 9],
    [7, 10, 8, 7, 3, 2, 5, 10, 6, 3],
]
