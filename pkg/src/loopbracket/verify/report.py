"""Report plumbing for the property suites.

A PropertyReport is a flat list of named residual-vs-tolerance records
plus the leaf parameters that generated them.  The record content is a
pure function of (geometry, N, d, seed, node counts); the wall-clock
duration is carried alongside but never enters the serialized record
content, so reports stay byte-identical across runs.
"""


class PropertyReport:

    def __init__(self, suite, case, N, d, seed):
        self.suite = suite
        self.case = case
        self.N = int(N)
        self.d = int(d)
        self.seed = int(seed)
        self.records = []
        self.notes = []
        self.duration = 0.0

    def add(self, name, residual, tolerance):
        residual = float(residual)
        tolerance = float(tolerance)
        self.records.append({
            "name": name,
            "residual": residual,
            "tolerance": tolerance,
            "passed": bool(residual <= tolerance),
        })

    def note(self, text):
        self.notes.append(str(text))

    @property
    def passed(self):
        return all(r["passed"] for r in self.records)

    def worst(self):
        """The record with the largest residual/tolerance ratio."""
        if not self.records:
            return None
        return max(self.records,
                   key=lambda r: r["residual"] / max(r["tolerance"], 1e-300))

    def failures(self):
        return [r for r in self.records if not r["passed"]]

    def to_dict(self):
        """Deterministic content (no timing)."""
        return {
            "suite": self.suite,
            "case": self.case,
            "N": self.N,
            "d": self.d,
            "seed": self.seed,
            "passed": self.passed,
            "records": [dict(r) for r in self.records],
            "notes": list(self.notes),
        }

    def __repr__(self):
        status = "pass" if self.passed else "FAIL"
        return "<PropertyReport %s %s N=%d d=%d seed=%d: %s (%d records)>" \
            % (self.suite, self.case, self.N, self.d, self.seed, status,
               len(self.records))
