import json

import pytest

from sectorcover import cli
from sectorcover.metrics import MetricsReport

from conftest import GOLDEN


@pytest.fixture(scope="module")
def rerun(tmp_path_factory):
    out = tmp_path_factory.mktemp("golden")
    code = cli.main(["plan", "--map", str(GOLDEN / "lshape_map.json"), "--config", str(GOLDEN / "lshape.cfg"), "--out", str(out)])
    assert code == 0
    return out


def test_plan_matches_golden_bytes(rerun):
    assert (rerun / "plan.json").read_bytes() == (GOLDEN / "plan.json").read_bytes()


def test_report_matches_golden(rerun):
    got = json.loads((rerun / "report.json").read_text())
    want = json.loads((GOLDEN / "report.json").read_text())
    assert got.keys() == want.keys()
    for k, v in want.items():
        if isinstance(v, float):
            assert got[k] == pytest.approx(v, abs=1e-9), k
        else:
            assert got[k] == v, k


def test_golden_report_schema():
    d = json.loads((GOLDEN / "report.json").read_text())
    r = MetricsReport.from_dict(d)
    assert r.to_dict() == d
    assert r.sector_count == 2 and r.num_coverage_lines == 6
