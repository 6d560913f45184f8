"""Numerical tolerances used for classification and verification.

Most thresholds grow like ``1 + n**2`` with the eigenvalue index, because
eigenvalues themselves grow like ``n**2``.
"""

from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    #: symmetric flag: max|q(x) - q(pi - x)| <= symmetry * (1 + max|q|)
    symmetry: float = 1e-10
    #: a gap is closed when its length is <= gap_length * (1 + n^2)
    gap_length: float = 1e-5
    #: ODE route: gap extremum g = |Delta| - 1 below this*(1+n^2) is a double root
    gap_value: float = 1e-12
    #: product route: max(p) - 2 below this*(1+n^2) is a double root; a value
    #: floor g maps to a width ~ sqrt(32 g) n / pi, so this matches gap_length
    product_gap_value: float = 3e-11
    #: sign dead-zone for endpoint matching (eps) and eta, times (1 + n^2)
    deadzone: float = 1e-6
    #: omega dead-zone on |delta(gamma_n)|, times (1 + n)
    omega: float = 1e-8
    #: relative tolerance of the two weight-number formulas (norm vs product)
    weights_rtol: float = 1e-6
    #: allowed negative margin in the band and interval solvability checks
    condition_margin: float = 1e-6
    #: L2 tolerance of a roundtrip reconstruction
    roundtrip_l2: float = 1e-2

    def scaled(self, name, n):
        if name in ("gap_length", "gap_value", "product_gap_value", "deadzone"):
            return getattr(self, name) * (1.0 + float(n) ** 2)
        if name == "omega":
            return self.omega * (1.0 + float(n))
        return getattr(self, name)

    def override(self, pairs):
        """Return a copy with ``KEY=VAL`` strings (or a mapping) applied."""
        if isinstance(pairs, dict):
            items = pairs.items()
        else:
            items = []
            for item in pairs:
                key, sep, val = item.partition("=")
                if not sep:
                    raise ValueError(f"tolerance override {item!r} is not KEY=VAL")
                items.append((key.strip(), val))
        known = {f.name for f in fields(self)}
        updates = {}
        for key, val in items:
            if key not in known:
                raise ValueError(f"unknown tolerance {key!r}; known: {sorted(known)}")
            val = float(val)
            if not val > 0:
                raise ValueError(f"tolerance {key} must be positive")
            updates[key] = val
        return replace(self, **updates)


DEFAULT = Tolerances()
