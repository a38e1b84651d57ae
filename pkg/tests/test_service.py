import json

from fastapi.testclient import TestClient

from stringy.service import app

client = TestClient(app)

A1 = {"group": {"mu": 2}, "weights": [1, 1]}
GM = {"group": "Gm", "weights": [1, -1]}


class TestHealthAndSectors:
    def test_health(self):
        r = client.get("/health")
        assert r.status_code == 200 and r.json() == {"status": "ok"}

    def test_openapi_schema_builds(self):
        r = client.get("/openapi.json")
        assert r.status_code == 200
        paths = set(r.json()["paths"])
        assert {"/sectors", "/weights", "/integrate", "/gsnf", "/batyrev",
                "/oracle/groupoid-count", "/gorenstein-oracle", "/compare",
                "/verify"} <= paths

    def test_sectors_all(self):
        r = client.post("/sectors", json={"stack": A1})
        assert r.status_code == 200
        secs = r.json()["sectors"]
        assert [s["ell"] for s in secs] == [1, 2]
        assert secs[1]["age"] == "1"

    def test_sectors_gm_requires_ell(self):
        r = client.post("/sectors", json={"stack": GM})
        assert r.status_code == 422
        r = client.post("/sectors", json={"stack": GM, "ell": 4})
        assert r.status_code == 200
        assert [s["label"] for s in r.json()["sectors"]] == [1, 3]

    def test_collision_flagging(self):
        r = client.post("/sectors", json={"stack": {"group": "Gm", "weights": [2, -2]},
                                          "ell": 4})
        flags = [s["signature_collision"] for s in r.json()["sectors"]]
        assert flags == [False, True]

    def test_invalid_stack(self):
        r = client.post("/sectors", json={"stack": {"group": {"mu": 4},
                                                    "weights": [2, 2]}})
        assert r.status_code in (400, 422)


class TestWeights:
    def test_mu_table(self):
        r = client.post("/weights", json={"stack": {"group": {"mu": 3},
                                                    "weights": [1, 1]}})
        assert r.status_code == 200
        wts = sorted(rep["wt"] for rep in r.json()["reports"])
        assert wts == ["0", "2/3", "4/3"]

    def test_gm_table(self):
        r = client.post("/weights", json={"stack": GM, "ells": [2, 3, 4, 5, 6]})
        assert all(rep["wt"] == "1" for rep in r.json()["reports"])


class TestIntegrate:
    def test_a1_with_specializations(self):
        r = client.post("/integrate", json={"stack": A1, "q": [3, 5]})
        body = r.json()
        assert body["stringy"]["terms"] == [
            {"u": 0, "v": 0, "num": [0, 1, 1], "den": [1]}]
        assert body["specializations"] == [
            {"q": 3, "value": "12"}, {"q": 5, "value": "30"}]

    def test_non_gorenstein_specialization_rejected(self):
        r = client.post("/integrate", json={"stack": {"group": {"mu": 3},
                                                      "weights": [1, 1]},
                                            "q": [7]})
        assert r.status_code == 422

    def test_explicit_level_recomputes_volumes(self):
        r0 = client.post("/integrate", json={"stack": A1})
        r2 = client.post("/integrate", json={"stack": A1, "level": 2})
        assert r0.json()["integral"] == r2.json()["integral"]


class TestGsnf:
    MATRIX = {
        "field": {"Fp": 5}, "ell": 2, "precision": 8,
        "row_degrees": [1, 1], "col_degrees": [0, 1],
        "entries": [[[0, 1], [0, 0, 1]], [[0, 0, 0, 1], [0, 0, 1]]],
    }

    def test_smith_with_decomposition(self):
        r = client.post("/gsnf", json={"matrix": self.MATRIX, "decompose": True})
        body = r.json()
        assert body["certified"] is True
        assert sorted(p["valuation"] for p in body["pivots"]) == [1, 2]
        assert body["cokernel"]["torsion"] == [[1, 1], [2, 1]]

    def test_matrix_round_trip_through_wire(self):
        r = client.post("/gsnf", json={"matrix": self.MATRIX})
        U = r.json()["U"]
        assert U["field"] == {"Fp": 5} and U["precision"] == 8

    def test_inhomogeneous_rejected(self):
        bad = dict(self.MATRIX, entries=[[[1], [0, 0, 1]],
                                         [[0, 0, 0, 1], [0, 0, 1]]])
        r = client.post("/gsnf", json={"matrix": bad})
        assert r.status_code == 422
        assert "homogeneous" in r.json()["detail"]

    def test_strict_precision_error(self):
        zero = {"field": "Q", "ell": 1, "precision": 2, "row_degrees": [0],
                "col_degrees": [0], "entries": [[[0, 0]]]}
        r = client.post("/gsnf", json={"matrix": zero, "require_all_pivots": True})
        assert r.status_code == 422 and "precision" in r.json()["detail"]


class TestOracleEndpoints:
    def test_groupoid_count(self):
        r = client.post("/oracle/groupoid-count",
                        json={"stack": A1, "ell": 2, "label": 1, "n": 1, "q": 3})
        assert r.json() == {"count": "81"}

    def test_split_condition(self):
        req = {"stack": {"group": {"mu": 3}, "weights": [1, 2]},
               "ell": 3, "label": 1, "n": 0, "q": 5}
        assert client.post("/oracle/groupoid-count", json=req).status_code == 422
        req["require_split"] = False
        assert client.post("/oracle/groupoid-count", json=req).json()["count"] == "25"

    def test_gorenstein_oracle(self):
        r = client.post("/gorenstein-oracle", json={"stack": A1, "q": 3,
                                                    "n_max": 3, "e_max": 3})
        body = r.json()
        assert body["partial_sum"] == "320/243"
        assert body["tail_bound"] == "4/243"
        assert body["method"] == "profile"

    def test_gorenstein_oracle_rejects_non_gorenstein(self):
        r = client.post("/gorenstein-oracle",
                        json={"stack": {"group": {"mu": 3}, "weights": [1, 1]},
                              "q": 7})
        assert r.status_code == 422


class TestCompareAndVerify:
    def test_compare_a1(self):
        r = client.post("/compare", json={"stack": A1, "q": [3, 5]})
        body = r.json()
        assert body["all_ok"] is True
        assert body["sector_batyrev_agree"] is True
        assert [pc["q"] for pc in body["pointcounts"]] == [3, 5]
        assert body["hpq"] == [{"p": "1", "q": "1", "h": "1"},
                               {"p": "2", "q": "2", "h": "1"}]

    def test_verify_height_weight(self):
        r = client.post("/verify", json={"stack": A1, "samples": 5, "seed": 1,
                                         "precision": 16})
        body = r.json()
        assert body["all_equal"] is True and body["checked"] == 5
        led = body["results"][0]["ledger"]
        assert led["equal"] is True and led["wt"] == "1"

    def test_verify_crepancy(self):
        r = client.post("/verify", json={"identity": "crepancy", "stack": A1,
                                         "samples": 4, "seed": 2})
        assert r.json()["all_equal"] is True

    def test_verify_needs_hypersurface(self):
        r = client.post("/verify", json={"stack": {"group": {"mu": 3},
                                                   "weights": [1, 1]}})
        assert r.status_code == 422


class TestWireExactness:
    def test_rationals_travel_as_strings(self):
        r = client.post("/gorenstein-oracle", json={"stack": A1, "q": 7,
                                                    "n_max": 3, "e_max": 2})
        raw = json.loads(r.content)
        assert raw["partial_sum"] == "2736/2401"
        assert all("/" in b["measure"] or b["measure"].isdigit()
                   for b in raw["bins"])
