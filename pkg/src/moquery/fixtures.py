"""The freelancer photographer table used as the canonical worked example."""

from moquery.model import Dataset

PHOTOGRAPHERS = (
    ("JS", (3, 9.8)),
    ("FS", (2, 7.8)),
    ("PT", (6, 7.3)),
    ("MMM", (5, 6.2)),
    ("NF", (9, 5.7)),
    ("SS", (10, 3)),
    ("MR", (9, 2)),
    ("DR", (8, 4.5)),
)
COLUMNS = ("experience", "score")

# weights of the two worked scoring functions
F1 = (0.6, 2.0)
F2 = (1.3, 1.0)
# closure of "w2 > w1"
PREFER_SCORE = "w2 > w1"


def photographers() -> Dataset:
    return Dataset.from_rows(PHOTOGRAPHERS, names=COLUMNS)


def photographers_csv() -> str:
    lines = ["name," + ",".join(COLUMNS)]
    lines += [f"{i},{a:g},{b:g}" for i, (a, b) in PHOTOGRAPHERS]
    return "\n".join(lines) + "\n"
