from dataclasses import asdict, dataclass, field


@dataclass
class Counters:
    """Per-run instrumentation. Each query run owns its own instance."""

    sorted_accesses: int = 0
    random_accesses: int = 0
    dominance_tests: int = 0
    evictions: int = 0
    lp_solves: int = 0
    vertex_enumerations: int = 0
    # top-k: largest candidate buffer held at any time
    max_buffer: int = 0
    # flexible skyline: window tests performed for each examined tuple
    window_tests: list = field(default_factory=list)

    def note_buffer(self, size):
        if size > self.max_buffer:
            self.max_buffer = size

    @property
    def max_window_tests(self):
        return max(self.window_tests, default=0)

    def as_dict(self):
        out = asdict(self)
        out.pop("window_tests")
        out["max_window_tests"] = self.max_window_tests
        return out
