"""Regenerate tests/fixtures from the backend.

Builds the two-car approach scenario with the scenecrit CLI, starts the
service in-process, and dumps the exact response bodies the viewer consumes.
Run from the frontend directory:

    python3 scripts/make_fixtures.py
"""

import json
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from scenecrit.cli import main
from scenecrit.service import create_app

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

LANE_MAP = {
    "version": 1,
    "meta": {"name": "straight approach"},
    "lanes": [
        {
            "lane_id": 1,
            "width": 3.5,
            "centerline": [[0.0, 0.0], [300.0, 0.0]],
            "successors": [],
            "left_neighbor": None,
            "right_neighbor": None,
        }
    ],
}


def approach_csv() -> str:
    head = "trackId,timestamp,xCenter,yCenter,heading,length,width,class,xVelocity,yVelocity"
    rows = [head]
    for k in range(60):
        t = k * 100
        rows.append(f"1,{t},{5.0 + 15.0 * t / 1000.0},0.0,0.0,4.0,2.0,car,15.0,0.0")
        rows.append(f"2,{t},{45.0 + 10.0 * t / 1000.0},0.0,0.0,4.0,2.0,car,10.0,0.0")
    return "\n".join(rows) + "\n"


def dump(name: str, payload) -> None:
    path = FIXTURES / name
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {path.relative_to(Path.cwd())}")


def run() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        root = Path(tmp)
        tracks = root / "approach.csv"
        tracks.write_text(approach_csv(), encoding="utf-8")
        lane_map = root / "map.json"
        lane_map.write_text(json.dumps(LANE_MAP), encoding="utf-8")
        out = root / "store" / "approach"
        code = main(
            ["analyze", "--tracks", str(tracks), "--map", str(lane_map), "--out", str(out)]
        )
        assert code == 0, "analyze failed"

        client = TestClient(create_app(root / "store"))

        def get(path: str, **params):
            resp = client.get(path, params=params or None)
            assert resp.status_code == 200, f"{path} -> {resp.status_code}: {resp.text}"
            return resp.json()

        dump("scenarios.json", get("/api/scenarios"))
        dump("scenario.json", get("/api/scenarios/approach"))
        dump("map.json", get("/api/scenarios/approach/map"))
        dump(
            "timeline_inv_ttc.json",
            get("/api/scenarios/approach/timeline", measure="inv_ttc"),
        )
        dump(
            "intervals_inv_ttc_0.3.json",
            get(
                "/api/scenarios/approach/intervals",
                measure="inv_ttc",
                threshold=0.3,
            ),
        )
        for threshold in (0.1, 0.5, 0.8, 10.0):
            dump(
                f"graph_5900_t{threshold}.json",
                get(
                    "/api/scenarios/approach/frames/5900/graph",
                    measure="inv_ttc",
                    threshold=threshold,
                ),
            )
        dump(
            "cube_0_5900_s5.json",
            get("/api/scenarios/approach/cube", **{"from": 0, "to": 5900, "stride": 5}),
        )
        dump("poses_5900.json", get("/api/scenarios/approach/frames/5900/poses"))


if __name__ == "__main__":
    run()
