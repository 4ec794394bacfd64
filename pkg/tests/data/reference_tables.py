# tests/data/reference_tables.py
"""Reference scenario verdicts on five disks, keyed by alive set in ascending combination order."""

ALIVE_PAIRS = [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]

# Three failed disks, two alive
TABLE_F3 = {
    "RR": [False, True, True, False, False, True, True, False, True, False],
    "PP1": [True, False, False, True, True, False, False, True, False, True],
    "RP1": [True, False, False, True, True, False, False, True, False, True],
    "PP2": [True] * 10,
    "RP2": [True] * 10,
}

RR_GOOD_PAIRS = {(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)}
PARITY_GOOD_PAIRS = {(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)}

FT_DEGREES = {"RR": 2, "PP1": 2, "PP2": 3, "RP1": 2, "RP2": 3}

# (scheme, p) -> exact reliability
EXACT_AT_09 = {"PP2": 0.99954, "RR": 0.99549}
KOON_3_5_AT_09 = 0.99144
PP2_AT_10000_HOURS = 0.6054
