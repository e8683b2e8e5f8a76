"""Constraint files, dataset CSV output and result printing."""

import csv
import io
import json

from moquery.errors import DataError, LoadError
from moquery.model import parse_constraint


def parse_constraints(lines, m):
    """One inequality per line, e.g. ``0.5 w1 - w2 <= 0``; ``#`` starts a comment."""
    out = []
    for lineno, line in enumerate(lines, start=1):
        line = line.split("#", 1)[0].strip()
        if line:
            out.extend(parse_constraint(line, m, lineno))
    return out


def read_constraints(path, m):
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_constraints(fh, m)
    except OSError as e:
        raise DataError(f"cannot read constraints file: {e}") from None
    except LoadError as e:
        raise LoadError(f"{path}: {e}") from None


def dataset_csv(d) -> str:
    """Render with raw (un-negated) values; floats use repr so they round-trip."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id"] + [a.name for a in d.schema])
    for t in d.tuples:
        w.writerow([t.id] + [repr(float(v)) for v in d.raw_values(t)])
    return buf.getvalue()


def rows_csv(rows, columns) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def format_ids(ids, scores=None, as_json=False, stats=None) -> str:
    if as_json:
        doc = {"ids": list(ids)}
        if scores is not None:
            doc["scores"] = list(scores)
        if stats is not None:
            doc["stats"] = stats
        return json.dumps(doc, sort_keys=True) + "\n"
    if scores is not None:
        return "".join(f"{i}\t{s!r}\n" for i, s in zip(ids, scores))
    return "".join(f"{i}\n" for i in ids)
