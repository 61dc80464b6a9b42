from fastapi.testclient import TestClient

from qlab.service import create_app


def client():
    return TestClient(create_app())


class TestHealthAndCatalog:
    def test_health(self):
        r = client().get("/health")
        assert r.status_code == 200
        assert r.json() == {"status": "ok"}

    def test_catalog(self):
        doc = client().get("/catalog").json()
        assert "f" in doc["series"]
        assert "ZETA5" in doc["suites"]


class TestExpand:
    def test_f_order_five(self):
        r = client().post("/expand", json={"series": "f", "order": 5})
        assert r.status_code == 200
        doc = r.json()
        assert doc["order"] == 5 and doc["pole_exp"] == 0
        assert len(doc["coeffs"]) == 6
        assert [c["poly"].get("0") for c in doc["coeffs"]] == ["1", "1", "-2", "3", "-3", "3"]

    def test_utilde_fold_one(self):
        doc = client().post(
            "/expand", json={"series": "utilde", "k": 1, "order": 2}
        ).json()
        assert doc["coeffs"][2]["poly"] == {"-1": "1", "0": "1", "1": "1"}

    def test_unknown_series(self):
        r = client().post("/expand", json={"series": "nope", "order": 3})
        assert r.status_code == 400
        assert "unknown series" in r.json()["error"]

    def test_bad_order_schema(self):
        r = client().post("/expand", json={"series": "f", "order": -1})
        assert r.status_code == 422


class TestRoot:
    def test_g3_rational(self):
        doc = client().post("/root", json={"series": "g3", "m": 1, "z": "3"}).json()
        assert doc == {"kind": "rational", "value": "-3/7"}

    def test_f_exact(self):
        doc = client().post("/root", json={"series": "f", "m": 5}).json()
        assert doc["kind"] == "cyclotomic" and doc["m"] == 5
        assert len(doc["coords"]) == 4

    def test_uk_numeric_embedding(self):
        doc = client().post(
            "/root",
            json={"series": "uk", "m": 2, "z": "1", "k": 1, "exact": False},
        ).json()
        assert doc["kind"] == "complex"
        assert doc["re"].startswith("3.0")

    def test_singular_z(self):
        r = client().post("/root", json={"series": "g3", "m": 4, "z": "zeta(24)"})
        assert r.status_code == 400
        assert "singular" in r.json()["error"].lower()

    def test_missing_z(self):
        r = client().post("/root", json={"series": "g3", "m": 3})
        assert r.status_code == 400

    def test_gaussian_z(self):
        r = client().post("/root", json={"series": "uk", "m": 3, "z": "1+i"})
        assert r.status_code == 200
        assert r.json()["kind"] == "cyclotomic"


class TestEval:
    def test_f_at_q_tenth(self):
        doc = client().post(
            "/eval", json={"series": "f", "q": "1/10", "order": 30}
        ).json()
        assert doc["value"]["kind"] == "complex"
        assert doc["value"]["re"].startswith("1.0827")

    def test_bad_q(self):
        r = client().post("/eval", json={"series": "f", "q": "3/2", "order": 10})
        assert r.status_code == 400


class TestRadial:
    def test_f_toward_zeta3(self):
        doc = client().post(
            "/radial",
            json={"series": "f", "m": 3, "j_lo": 4, "j_hi": 9, "precision_bits": 128},
        ).json()
        assert doc["target_m"] == 3
        assert len(doc["samples"]) == 6
        assert doc["unreliable"] is False
        assert doc["error_bound"] is not None

    def test_single_rho_unreliable(self):
        doc = client().post(
            "/radial",
            json={"series": "f", "m": 3, "rho": ["0.5"], "precision_bits": 96},
        ).json()
        assert doc["unreliable"] is True

    def test_g3_needs_z(self):
        r = client().post("/radial", json={"series": "g3", "m": 3})
        assert r.status_code == 400


class TestEnumerate:
    def test_weak_weight_two(self):
        doc = client().post(
            "/enumerate", json={"max_weight": 2, "k": 1, "strong": False}
        ).json()
        weight_two = {(c["rank"], c["count"]) for c in doc["counts"] if c["weight"] == 2}
        assert weight_two == {(-1, 1), (0, 1), (1, 1)}
        assert doc["strong"] is False and doc["k"] == 1 and doc["max_weight"] == 2


class TestVerify:
    def test_single_suite(self):
        doc = client().post("/verify", json={"suites": ["ZETA5"], "order": 30}).json()
        assert doc["all_passed"] is True
        assert doc["reports"][0]["id"] == "ZETA5"

    def test_unknown_suite(self):
        r = client().post("/verify", json={"suites": ["NOPE"], "order": 30})
        assert r.status_code == 400

    def test_known_failure_reported(self):
        doc = client().post("/verify", json={"suites": ["EQ17"], "order": 30}).json()
        assert doc["all_passed"] is False
        rep = doc["reports"][0]
        assert rep["passed"] is False
        assert rep["first_discrepancy"]["where"]
