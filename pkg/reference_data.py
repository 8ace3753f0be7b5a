"""
Published reference values used by `main.py reproduce` and the test suite.

Polynomials are integer coefficient lists, highest degree first.
"""

# The 55 snec tuples.
SNEC_TABLE = [
    (0, 0, 0, 1, 1, 3), (0, 0, 1, 2, 2, 0), (0, 1, 2, 0, 0, 2), (1, 0, 0, 0, 4, 0), (1, 2, 0, 2, 0, 0),
    (0, 0, 0, 1, 3, 1), (0, 0, 2, 1, 1, 1), (0, 2, 0, 0, 0, 2), (1, 0, 0, 1, 1, 1), (2, 0, 0, 0, 2, 0),
    (0, 0, 0, 2, 0, 2), (0, 1, 0, 0, 0, 4), (0, 2, 0, 1, 1, 1), (1, 0, 0, 2, 0, 0), (2, 0, 0, 1, 1, 1),
    (0, 0, 0, 2, 2, 0), (0, 1, 0, 0, 2, 2), (0, 2, 0, 2, 0, 0), (1, 0, 0, 2, 0, 2), (2, 0, 0, 2, 0, 0),
    (0, 0, 0, 3, 1, 1), (0, 1, 0, 1, 1, 1), (0, 2, 1, 0, 0, 2), (1, 0, 0, 2, 2, 0), (2, 0, 1, 0, 2, 0),
    (0, 0, 0, 4, 0, 0), (0, 1, 0, 2, 0, 0), (0, 3, 0, 0, 0, 0), (1, 0, 0, 4, 0, 0), (2, 1, 0, 2, 0, 0),
    (0, 0, 1, 0, 0, 4), (0, 1, 0, 2, 0, 2), (0, 3, 0, 0, 0, 2), (1, 0, 1, 0, 2, 0), (3, 0, 0, 0, 0, 0),
    (0, 0, 1, 0, 2, 2), (0, 1, 0, 2, 2, 0), (0, 3, 0, 2, 0, 0), (1, 0, 1, 1, 1, 1), (3, 0, 0, 0, 2, 0),
    (0, 0, 1, 0, 4, 0), (0, 1, 0, 4, 0, 0), (0, 4, 0, 0, 0, 0), (1, 0, 2, 0, 2, 0), (3, 0, 0, 2, 0, 0),
    (0, 0, 1, 1, 1, 1), (0, 1, 1, 0, 0, 2), (0, 5, 0, 0, 0, 0), (1, 1, 0, 1, 1, 1), (4, 0, 0, 0, 0, 0),
    (0, 0, 1, 2, 0, 2), (0, 1, 1, 1, 1, 1), (1, 0, 0, 0, 2, 2), (1, 1, 0, 2, 0, 0), (5, 0, 0, 0, 0, 0),
]

K_SIZE = 248395
L_UPPER = 13617

# Worked packings: small corona eta, mid corona zeta, large corona xi.
EXAMPLES = [
    {
        "name": "example-1",
        "eta": (0, 0, 0, 1, 1, 3), "zeta": (1, 0, 3, 0, 2, 0), "xi": (0, 0, 2, 4, 0, 4),
        "r": "0.438405", "s": "0.299248",
        "s_poly": [1, -54, 175, -68, 15, -6, 1],
        "r_poly": [5, 38, 39, -28, 19, -10, 1],
    },
    {
        "name": "example-2",
        "eta": (0, 0, 0, 1, 1, 3), "zeta": (0, 0, 3, 2, 2, 0), "xi": (0, 2, 2, 0, 0, 4),
        "r": "0.822210", "s": "0.468169",
        "s_poly": [49, -340, 1200, -1600, -378, 560, 64, -64, -7, 4],
        "r_poly": [2, 17, 120, 56, 60, -2, -88, -40, 2, 1],
    },
    {
        "name": "example-3",
        "eta": (0, 0, 0, 1, 1, 3), "zeta": (2, 0, 3, 0, 2, 0), "xi": (0, 0, 1, 4, 0, 2),
        "r": "0.865150", "s": "0.484497",
        "s_poly": [1, -824, 5452, -14096, 24438, -20688, 15404, -13520, -3375, 5480, 192, -512],
        "r_poly": [1, 18, 132, 568, 1454, 1788, 308, -680, 121, -670, -1120, 128],
    },
    {
        "name": "example-4",
        "eta": (0, 0, 0, 2, 2, 0), "zeta": (0, 0, 0, 2, 6, 0), "xi": (0, 1, 3, 0, 0, 6),
        "r": "0.948799", "s": "0.275178",
        "s_poly": [20, -36, 13, 6, -2],
        "r_poly": [5, 24, 15, -38, -2],
    },
    {
        "name": "example-5",
        "eta": (0, 0, 0, 2, 2, 0), "zeta": (1, 1, 0, 2, 2, 0), "xi": (2, 1, 1, 2, 0, 2),
        "r": "0.667499", "s": "0.237538",
        "s_poly": [64, -704, 15792, -33536, 29964, -4540, -4859, 3322, -1757, 136, 307, -102, 9],
        "r_poly": [1, -4, 66, -3324, 727, 56696, 81500, -29400, -46657, 332, 5314, 276, 9],
    },
]

# Agreement required with the six-decimal values above.
EXAMPLE_TOLERANCE = "5e-7"

# cos-expansion squaring of eta = (0,0,0,1,1,3) is divisible by the square of this.
DETRIG_BRACKET = {
    "eta": (0, 0, 0, 1, 1, 3),
    # {(i, j): c} for c * r^i * s^j
    "terms": {
        (6, 1): 1, (6, 0): -4, (5, 2): 12, (5, 1): -26, (5, 0): -4,
        (4, 3): 54, (4, 2): -40, (4, 1): -7, (3, 4): 108, (3, 3): 28,
        (3, 2): 12, (2, 5): 81, (2, 4): 60, (2, 3): 14, (1, 5): -18,
        (1, 4): -16, (0, 5): 1,
    },
}

# Radii of a packing with no tuples attached.
SAMPLE_RADII = {
    "s": "0.208266", "s_poly": [4, -28, -27, 2, 1],
    "r": "0.635671", "r_poly": [3, 60, -18, -12, -1],
}

# A pair whose intercept sits very close to the origin.
NEAR_ORIGIN = {
    "eta": (0, 0, 1, 1, 1, 1), "zeta": (1, 0, 4, 0, 2, 0),
    "r": "0.0000581261602", "s": "0.0000125188787",
    "r_poly": [471537, -41484960, -659124096, 58464363120, 1743725080084, 17900565761408,
               80565633090512, 135832773328592, -55749863701666, -312172905934624,
               -79130757636960, 18998456541200, 5684720044996, -232167452096,
               -4432749936, -23293776, 1369],
    "s_poly": [9, -2952, 297624, -9490392, 146307340, -1264707784, 6454982728,
               -19303597784, 30925167782, -17475748952, -13037319960, 14055271864,
               4034895724, -2996664152, -1151616584, -109340424, 1369],
}

# gamma search at the near-origin point exceeds any practical node budget.
NEAR_ORIGIN_CAP_PRODUCT = 7 * 10 ** 21

# Two-radii compact packing value, background check only.
TWO_RADII_POLY = [1, -8, -44, -232, -482, -24, 388, -120, 9]
TWO_RADII_ROOT = "0.545151"

# A very large squaring run, for the term cap.
HEAVY_DETRIG = {"kind": "beta", "xi": (1, 1, 12, 1, 1, 1)}
