"""Experiment configuration: parsing and geometric validation."""

import os

import yaml

from ..errors import ConfigInvalid
from ..geometry import (CaseGeometry, PoleDivisor, RATIONAL, TRIGONOMETRIC,
                        ELLIPTIC)

KNOWN_SUITES = ("bracket_axioms", "leaf_invariants", "integrability",
                "darboux_equivalence")


def _complex(v, field):
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 \
            and all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    raise ConfigInvalid("expected a number or [re, im] pair in %r" % field,
                        field=field)


class ExperimentConfig:
    """Validated description of one experiment.

    All geometric preconditions are checked here, before any
    computation starts; violations raise ConfigInvalid naming the
    offending field.
    """

    def __init__(self, data):
        if not isinstance(data, dict):
            raise ConfigInvalid("configuration must be a mapping",
                               field="(root)")
        self.case = data.get("case")
        if self.case not in (RATIONAL, TRIGONOMETRIC, ELLIPTIC):
            raise ConfigInvalid("case must be one of rational, "
                                "trigonometric, elliptic", field="case")
        self.N = data.get("N", 2)
        if not isinstance(self.N, int) or self.N < 1:
            raise ConfigInvalid("N must be a positive integer", field="N")
        self.seed = data.get("seed", 0)
        if not isinstance(self.seed, int):
            raise ConfigInvalid("seed must be an integer", field="seed")
        self.nodes = data.get("nodes", 512)
        if not isinstance(self.nodes, int) or self.nodes < 64:
            raise ConfigInvalid("nodes must be an integer >= 64",
                                field="nodes")
        self.omega1 = self.omega2 = None
        if self.case == ELLIPTIC:
            periods = data.get("periods")
            if not isinstance(periods, dict) or "omega1" not in periods \
                    or "omega2" not in periods:
                raise ConfigInvalid("elliptic case needs periods.omega1 "
                                    "and periods.omega2", field="periods")
            self.omega1 = _complex(periods["omega1"], "periods.omega1")
            self.omega2 = _complex(periods["omega2"], "periods.omega2")
            ratio = self.omega2 / self.omega1
            if ratio.imag <= 0:
                raise ConfigInvalid(
                    "Im(omega2/omega1) = %g must be positive" % ratio.imag,
                    field="periods")
        self.divisor_spec = data.get("divisor")
        self.degree = data.get("degree")
        if self.divisor_spec is None and self.degree is None:
            raise ConfigInvalid("give either degree or an explicit divisor",
                                field="divisor")
        if self.degree is not None and (not isinstance(self.degree, int)
                                        or self.degree < 1):
            raise ConfigInvalid("degree must be a positive integer",
                                field="degree")
        if self.divisor_spec is not None:
            if not isinstance(self.divisor_spec, list):
                raise ConfigInvalid("divisor must be a list of "
                                    "{point, multiplicity}", field="divisor")
            pts = []
            for i, item in enumerate(self.divisor_spec):
                if not isinstance(item, dict) or "point" not in item:
                    raise ConfigInvalid("divisor entry %d needs a point"
                                        % i, field="divisor")
                a = _complex(item["point"], "divisor[%d].point" % i)
                m = item.get("multiplicity", 1)
                if not isinstance(m, int) or m < 1:
                    raise ConfigInvalid(
                        "divisor entry %d multiplicity must be a positive "
                        "integer" % i, field="divisor")
                pts.append((a, m))
            self.divisor_spec = pts
        self.suites = data.get("suites", list(KNOWN_SUITES))
        if not isinstance(self.suites, list):
            raise ConfigInvalid("suites must be a list", field="suites")
        for name in self.suites:
            if name not in KNOWN_SUITES:
                raise ConfigInvalid("unknown suite %r (known: %s)"
                                    % (name, ", ".join(KNOWN_SUITES)),
                                    field="suites")
        self.out = data.get("out", "reports")
        self.tolerances = data.get("tolerances", {})
        if not isinstance(self.tolerances, dict):
            raise ConfigInvalid("tolerances must be a mapping",
                                field="tolerances")
        self.flow = data.get("flow", {})
        if not isinstance(self.flow, dict):
            raise ConfigInvalid("flow must be a mapping", field="flow")

    # -- realization ---------------------------------------------------

    def geometry(self):
        # geometric invariants (divisor placement, lattice orientation)
        # are re-checked by the constructors; both raise ConfigInvalid
        return CaseGeometry(self.case, self.N, omega1=self.omega1,
                            omega2=self.omega2, node_count=self.nodes)

    def divisor(self, geo):
        from ..verify import default_divisor
        if self.divisor_spec is not None:
            return PoleDivisor(self.divisor_spec, geo)
        return default_divisor(geo, self.degree)

    @property
    def d(self):
        if self.divisor_spec is not None:
            return sum(m for _, m in self.divisor_spec)
        return self.degree


def load_config(path, seed=None, nodes=None, suites=None, out=None):
    """Read and validate a config file, applying CLI overrides."""
    if not os.path.exists(path):
        raise ConfigInvalid("config file %r not found" % path,
                            field="--config")
    with open(path) as fh:
        try:
            data = yaml.safe_load(fh)
        except yaml.YAMLError as err:
            raise ConfigInvalid("config parse error: %s" % err,
                                field="(syntax)")
    if data is None:
        data = {}
    if seed is not None:
        data["seed"] = int(seed)
    if nodes is not None:
        data["nodes"] = int(nodes)
    if suites:
        data["suites"] = list(suites)
    if out is not None:
        data["out"] = out
    return ExperimentConfig(data)
