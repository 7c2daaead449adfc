import json
import subprocess
import sys

import pytest
from fastapi.testclient import TestClient

from contrex.api.service import create_app
from contrex.api.sessions import create_session, load_session, persist_session, session_to_json
from contrex.solver import SolveParams


@pytest.fixture()
def client():
    return TestClient(create_app(SolveParams(time_limit=30)))


@pytest.fixture()
def kp_session(client):
    r = client.post("/sessions", json={"fixture": "kp-micro"})
    assert r.status_code == 200
    return r.json()


class TestSessions:
    def test_create_from_fixture(self, kp_session):
        assert kp_session["objective"] == 7
        assert kp_session["status"] == "Optimal"
        assert kp_session["solution"]["x[Bob][bed]"] == 1

    def test_create_from_genspec(self, client):
        r = client.post("/sessions", json={"domain": "tap", "agents": 2, "tasks": 3, "seed": 5})
        assert r.status_code == 200
        assert r.json()["domain"] == "tap"

    def test_create_from_full_instance(self, client, kp_micro):
        from contrex import domains

        r = client.post("/sessions", json=domains.instance_to_json(kp_micro))
        assert r.status_code == 200
        assert r.json()["objective"] == 7

    def test_malformed_payload_is_400(self, client):
        r = client.post("/sessions", json={"bad": "payload"})
        assert r.status_code == 400
        assert r.json()["error"] == "validation_error"

    def test_duplicate_create_distinct_ids_same_solution(self, client):
        a = client.post("/sessions", json={"fixture": "kp-micro"}).json()
        b = client.post("/sessions", json={"fixture": "kp-micro"}).json()
        assert a["id"] != b["id"]
        assert a["solution"] == b["solution"]

    def test_get_session_includes_instance_and_history(self, client, kp_session):
        r = client.get(f"/sessions/{kp_session['id']}")
        assert r.status_code == 200
        body = r.json()
        assert body["instance"]["domain"] == "kp"
        assert body["history"] == []

    def test_unknown_session_404(self, client):
        assert client.get("/sessions/nope").status_code == 404


class TestQuestionsAndAsk:
    def test_questions_list(self, client, kp_session):
        r = client.get(f"/sessions/{kp_session['id']}/questions")
        assert r.json() == [
            {
                "variable": "x[Alice][bed]",
                "prompt": "Why was Alice's bed not included in the depot?",
                "agents": ["Alice"],
            }
        ]

    def test_ask_quality_variant(self, client, kp_session):
        r = client.post(
            f"/sessions/{kp_session['id']}/ask", json={"variable": "x[Alice][bed]", "variant": "q"}
        )
        assert r.status_code == 200
        body = r.json()
        assert body["explanation"]["rendered"]["headline"] == "Total utility would decrease by 2"
        assert body["metrics"] == {"quality_diff": 2, "length": 2, "suboptimality_ratio": 1.4}
        assert body["s_prime"]["x[Alice][bed]"] == 1
        assert body["weights"] == {"alpha": 4, "beta": 1}

    def test_ask_defaults_to_quality_variant(self, client, kp_session):
        r = client.post(f"/sessions/{kp_session['id']}/ask", json={"variable": "x[Alice][bed]"})
        assert r.json()["variant"] == "q"

    def test_ask_already_satisfied(self, client, kp_session):
        r = client.post(f"/sessions/{kp_session['id']}/ask", json={"variable": "x[Bob][bed]"})
        body = r.json()
        assert body["metrics"]["quality_diff"] == 0
        assert body["metrics"]["length"] == 0
        assert body["explanation"]["increases"] == []

    def test_ask_unknown_variable_404(self, client, kp_session):
        r = client.post(f"/sessions/{kp_session['id']}/ask", json={"variable": "x[Zoe][yacht]"})
        assert r.status_code == 404
        assert r.json()["error"] == "unknown_variable"

    def test_ask_custom_weights(self, client, kp_session):
        r = client.post(
            f"/sessions/{kp_session['id']}/ask",
            json={"variable": "x[Alice][bed]", "alpha": 4, "beta": 1},
        )
        assert r.status_code == 200
        assert r.json()["variant"] == "custom"

    def test_property_infeasible_409(self, client):
        # a depot too small for the asked item: capacity below its space
        payload = {
            "domain": "kp",
            "agents": ["A", "B"],
            "items": ["big", "small"],
            "utility": {"A": {"big": 5, "small": 1}, "B": {"small": 2}},
            "space": {"big": 9, "small": 1},
            "depotCapacity": 3,
            "seed": 0,
        }
        r = client.post("/sessions", json=payload)
        sid = r.json()["id"]
        r = client.post(f"/sessions/{sid}/ask", json={"variable": "x[A][big]"})
        assert r.status_code == 409
        assert r.json()["error"] == "property_infeasible"
        assert "contradicts" in r.json()["message"]
        # the session stays usable afterwards
        r = client.get(f"/sessions/{sid}/questions")
        assert r.status_code == 200

    def test_repeated_ask_idempotent_content(self, client, kp_session):
        body = {"variable": "x[Alice][bed]", "variant": "c"}
        r1 = client.post(f"/sessions/{kp_session['id']}/ask", json=body).json()
        r2 = client.post(f"/sessions/{kp_session['id']}/ask", json=body).json()
        r1.pop("timings")
        r2.pop("timings")
        assert r1 == r2

    def test_history_appends_and_replays(self, client, kp_session):
        sid = kp_session["id"]
        client.post(f"/sessions/{sid}/ask", json={"variable": "x[Alice][bed]", "variant": "q"})
        client.post(f"/sessions/{sid}/ask", json={"variable": "x[Alice][bed]", "variant": "c"})
        history = client.get(f"/sessions/{sid}").json()["history"]
        assert len(history) == 2
        assert [h["variant"] for h in history] == ["q", "c"]

        # replay against a fresh session reproduces every explanation
        fresh = client.post("/sessions", json={"fixture": "kp-micro"}).json()
        for entry in history:
            r = client.post(
                f"/sessions/{fresh['id']}/ask",
                json={"variable": entry["question"]["variable"], "variant": entry["variant"]},
            ).json()
            assert r["explanation"] == entry["explanation"]


class TestConcurrency:
    def test_asks_on_distinct_sessions_do_not_interleave(self, client):
        import threading

        sids = [client.post("/sessions", json={"fixture": "kp-micro"}).json()["id"] for _ in range(4)]
        results = {}

        def ask(sid):
            r = client.post(f"/sessions/{sid}/ask", json={"variable": "x[Alice][bed]"})
            results[sid] = r.json()

        threads = [threading.Thread(target=ask, args=(sid,)) for sid in sids]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        for sid in sids:
            assert results[sid]["session"] == sid
            assert results[sid]["metrics"]["quality_diff"] == 2
            history = client.get(f"/sessions/{sid}").json()["history"]
            assert len(history) == 1


class TestPersistence:
    def test_round_trip_identity(self, tmp_path, client, kp_session):
        sid = kp_session["id"]
        client.post(f"/sessions/{sid}/ask", json={"variable": "x[Alice][bed]"})
        path = str(tmp_path / "sess.json")
        r = client.post(f"/sessions/{sid}/persist", json={"path": path})
        assert r.status_code == 200
        r = client.post("/sessions/load", json={"path": path})
        assert r.status_code == 200
        loaded = client.get(f"/sessions/{r.json()['id']}").json()
        original = client.get(f"/sessions/{sid}").json()
        assert loaded == original

    def test_direct_round_trip_equality(self, tmp_path):
        session = create_session({"fixture": "kp-micro"})
        path = tmp_path / "s.json"
        persist_session(session, path)
        again = load_session(path)
        assert session_to_json(again) == session_to_json(session)

    def test_schema_version_mismatch(self, tmp_path, client, kp_session):
        path = tmp_path / "sess.json"
        client.post(f"/sessions/{kp_session['id']}/persist", json={"path": str(path)})
        payload = json.loads(path.read_text())
        payload["schema_version"] = 99
        path.write_text(json.dumps(payload))
        r = client.post("/sessions/load", json={"path": str(path)})
        assert r.status_code == 409
        assert r.json()["error"] == "schema_version_mismatch"

    def test_load_missing_file_404(self, client):
        r = client.post("/sessions/load", json={"path": "/tmp/definitely-not-there.json"})
        assert r.status_code == 404


class TestCli:
    def _run(self, *args):
        return subprocess.run(
            [sys.executable, "-m", "contrex.api.cli", *args],
            capture_output=True,
            text=True,
            timeout=120,
        )

    def test_gen_solve_questions_ask_loop(self, tmp_path):
        inst = tmp_path / "inst.json"
        sol = tmp_path / "sol.json"
        expl = tmp_path / "expl.json"

        r = self._run("gen", "--fixture", "kp-micro", "-o", str(inst))
        assert r.returncode == 0, r.stderr
        assert json.loads(inst.read_text())["domain"] == "kp"

        r = self._run("solve", str(inst), "-o", str(sol))
        assert r.returncode == 0, r.stderr
        payload = json.loads(sol.read_text())
        assert payload["status"] == "Optimal" and payload["objective"] == 7
        assert set(payload["stats"]) == {"nodes", "wall_seconds"}

        r = self._run("questions", str(inst), str(sol))
        assert r.returncode == 0
        qs = json.loads(r.stdout)
        assert qs[0]["variable"] == "x[Alice][bed]"

        r = self._run("ask", str(inst), str(sol), "--var", "x[Alice][bed]", "--variant", "c", "-o", str(expl))
        assert r.returncode == 0, r.stderr
        body = json.loads(expl.read_text())
        assert body["rendered"]["headline"] == "Total utility would decrease by 2"
        assert body["abstract"]["quality_diff"] == 2

    def test_gen_generated_domain(self, tmp_path):
        inst = tmp_path / "inst.json"
        r = self._run("gen", "--domain", "tap", "--seed", "3", "--agents", "2", "--tasks", "3", "-o", str(inst))
        assert r.returncode == 0, r.stderr
        payload = json.loads(inst.read_text())
        assert payload["domain"] == "tap" and len(payload["tasks"]) == 3

    def test_bench_cli(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        out = tmp_path / "out.csv"
        cfg.write_text(
            json.dumps(
                {
                    "domain": "kp",
                    "sizes": [{"agents": 3, "items": 3}],
                    "instances_per_size": 1,
                    "questions_per_instance": 2,
                    "seed": 2,
                }
            )
        )
        r = self._run("bench", "--config", str(cfg), "--out", str(out))
        assert r.returncode == 0, r.stderr
        lines = out.read_text().splitlines()
        assert lines[0].startswith("domain,size,instance_seed")
        assert len(lines) >= 2

    def test_ask_unknown_variable_fails(self, tmp_path):
        inst = tmp_path / "inst.json"
        sol = tmp_path / "sol.json"
        self._run("gen", "--fixture", "kp-micro", "-o", str(inst))
        self._run("solve", str(inst), "-o", str(sol))
        r = self._run("ask", str(inst), str(sol), "--var", "nope")
        assert r.returncode == 2
        assert "unknown variable" in r.stderr
