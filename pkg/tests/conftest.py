import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def data():
    from mrpcorr.verify import load_data

    return load_data


@pytest.fixture(scope="session")
def rashomon(data):
    """The three agent frames (Z, E, R_u, R_u⁻¹) of the testimony example, keyed by agent."""
    from mrpcorr.frames import GraphFrame
    from mrpcorr.relcalc import FiniteDomain, FiniteRelation

    doc = data("frames/rashomon.json")
    dom = FiniteDomain.of(doc["domain"])
    e = FiniteRelation.from_pairs(dom, doc["E"])
    frames = {}
    for u, pairs in doc["R"].items():
        r = FiniteRelation.from_pairs(dom, pairs)
        frames[u] = GraphFrame(dom, e, r, r.converse())
    return doc, frames


@pytest.fixture(scope="session")
def path3(data):
    from mrpcorr.frames import frame_from_json

    doc = data("frames/path3.json")
    return doc, frame_from_json(doc)
