"""In-memory multi-objective query operators: top-k, skyline and flexible skyline."""

from moquery.model import Dataset, ScoringFunction, Tuple, WeightPolytope, load_csv, make_polytope, score

__all__ = ["Dataset", "ScoringFunction", "Tuple", "WeightPolytope", "load_csv", "make_polytope", "score"]
__version__ = "0.1.0"
