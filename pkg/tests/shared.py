"""Panels shared by the unit and acceptance tests."""
from coefbounds.phi import PhiSpec

PRESETS = {
    "halfplane": PhiSpec.half_plane(),
    "exp": PhiSpec.exponential(),
    "sqrt": PhiSpec.sqrt_lemniscate(),
    "janowski": PhiSpec.janowski(0.5, -0.5),
}
REAL_ALPHAS = (0.0, 0.5, 1.0, 2.0)

# one interior point per region
H_PANEL = {
    "D1": (0.2, 0.5),
    "D2": (1.0, 0.5),
    "D3": (0.2, -2.0),
    "D4": (1.0, -2.0),
    "D5": (1.0, 2.0),
    "D6": (3.0, 3.0),
    "D7": (5.0, 4.0),
    "D8": (1.0, -1.0),
    "D9": (3.0, -1.0),
    "D10": (3.0, 1.35),
    "D11": (6.0, 2.0),
    "D12": (6.0, 2.5),
}


def _cubic(s):
    t = s + 1
    return 4 / 27 * t**3 - t


def _low4(s):
    return -2 / 3 * (s + 1)


def _par(s):
    return (s * s + 8) / 12


def _rat_p(s):
    return 2 * s * (s + 1) / (s * s + 2 * s + 4)


def _rat_m(s):
    return 2 * s * (s - 1) / (s * s - 2 * s + 4)


def _lin7(s):
    return 2 / 3 * (s - 1)


# (region below/left, region above/right, kind, fixed coordinate or curve, free coordinate)
#   "h": boundary q2 = curve(q1), the two regions lie below and above
#   "v": boundary |q1| = c at the given q2, the two regions lie left and right
_BOUNDARIES = [
    ("D3", "D1", "h", lambda s: -1.0, 0.3),
    ("D1", "D5", "h", lambda s: 1.0, 0.25),
    ("D2", "D5", "h", lambda s: 1.0, 1.5),
    ("D8", "D2", "h", _cubic, 1.0),
    ("D8", "D2", "h", _cubic, 1.8),
    ("D4", "D8", "h", _low4, 1.2),
    ("D4", "D9", "h", _low4, 3.0),
    ("D4", "D9", "h", _low4, 6.0),
    ("D10", "D6", "h", _par, 2.5),
    ("D10", "D6", "h", _par, 3.5),
    ("D9", "D10", "h", _rat_p, 2.5),
    ("D9", "D10", "h", _rat_p, 3.6),
    ("D9", "D11", "h", _rat_p, 5.0),
    ("D11", "D12", "h", _rat_m, 5.0),
    ("D11", "D12", "h", _rat_m, 8.0),
    ("D12", "D7", "h", _lin7, 6.0),
    ("D3", "D4", "v", 0.5, -1.5),
    ("D5", "D6", "v", 2.0, 2.0),
    ("D6", "D7", "v", 4.0, 3.0),
    ("D10", "D11", "v", 4.0, 1.7),
]


def boundary_pairs(delta=1e-6):
    """Twenty points straddling shared region boundaries.

    Yields ``(region_a, point_a, region_b, point_b)`` with the two points a
    distance ``2 * delta`` apart across the boundary.
    """
    for ra, rb, kind, edge, free in _BOUNDARIES:
        if kind == "h":
            q2 = edge(free)
            yield ra, (free, q2 - delta), rb, (free, q2 + delta)
        else:
            yield ra, (edge - delta, free), rb, (edge + delta, free)
