"""Fixed benchmark matrices, n in {2, 3, 4}, invariant factors spanning -3..3.

Each document is in the same JSON shape the CLI reads.  ``EXPECTED`` holds the
descending invariant factors; the test suite checks them against the
minor-valuation oracle as well as the elimination.
"""

from __future__ import annotations

from .parsing import parse_matrix
from .series import DEFAULT_PRECISION, SeriesMatrix

DOCUMENTS: dict[str, dict] = {
    "running_2x2": {"n": 2, "entries": [["1", "1"], ["1", "1 + t"]]},
    "diag_t_tinv": {"n": 2, "entries": [["t", "0"], ["0", "t^-1"]]},
    "diag_spread": {"n": 2, "entries": [["t^-3", "0"], ["0", "t^3"]]},
    "upper_twist_2x2": {"n": 2, "entries": [["t^-2", "1"], ["0", "t"]]},
    "diag_3x3": {"n": 3, "entries": [["t^3", "0", "0"], ["0", "t", "0"], ["0", "0", "t^2"]]},
    "upper_twist_3x3": {"n": 3, "entries": [["t^-1", "1", "t"], ["0", "1", "2"], ["0", "0", "t^2"]]},
    "lower_twist_3x3": {"n": 3, "entries": [["t^2", "0", "0"], ["1 + t", "t^-1", "0"], ["2", "t", "1"]]},
    "cancelling_3x3": {"n": 3, "entries": [["1", "1", "0"], ["1", "1", "t"], ["0", "1", "1"]]},
    "graded_4x4": {
        "n": 4,
        "entries": [
            ["t^-3", "t^-2", "0", "0"],
            ["0", "t^-1", "1", "0"],
            ["0", "0", "1", "t"],
            ["0", "0", "0", "t^3"],
        ],
    },
    "twisted_4x4": {
        "n": 4,
        "entries": [
            ["t^-1", "0", "0", "t"],
            ["1", "t^-1", "0", "0"],
            ["0", "t", "2", "0"],
            ["0", "0", "t^2", "t^2 + t^3"],
        ],
    },
}

EXPECTED: dict[str, tuple[int, ...]] = {
    "running_2x2": (1, 0),
    "diag_t_tinv": (1, -1),
    "diag_spread": (3, -3),
    "upper_twist_2x2": (1, -2),
    "diag_3x3": (3, 2, 1),
    "upper_twist_3x3": (2, 0, -1),
    "lower_twist_3x3": (2, 0, -1),
    "cancelling_3x3": (1, 0, 0),
    "graded_4x4": (3, 0, -1, -3),
    "twisted_4x4": (2, 0, -1, -1),
}


def suite(precision: int = DEFAULT_PRECISION) -> dict[str, SeriesMatrix]:
    return {name: parse_matrix(doc, precision) for name, doc in DOCUMENTS.items()}
