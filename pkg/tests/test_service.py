import io as stdio
import time

import numpy as np
import pytest
from fastapi.testclient import TestClient

from contrastive_lens.datasets import gen_toy_appendix_a
from contrastive_lens.service import create_app


def csv_bytes(matrix) -> bytes:
    buf = stdio.StringIO()
    for row in np.atleast_2d(matrix):
        buf.write(",".join(repr(float(x)) for x in row) + "\n")
    return buf.getvalue().encode()


def upload(client, target, background, labels=None):
    files = {
        "target": ("target.csv", csv_bytes(target), "text/csv"),
        "background": ("background.csv", csv_bytes(background), "text/csv"),
    }
    if labels is not None:
        files["labels"] = ("labels.csv", csv_bytes(np.asarray(labels, float)[:, None]), "text/csv")
    return client.post("/datasets", files=files)


@pytest.fixture
def client():
    return TestClient(create_app())


@pytest.fixture
def toy_client(client):
    target, background = gen_toy_appendix_a(seed=0)
    response = upload(client, target.data, background, labels=target.labels)
    assert response.status_code == 200
    return client


class TestDatasets:
    def test_toy_upload_shape(self, client):
        target, background = gen_toy_appendix_a(seed=0)
        response = upload(client, target.data, background)
        assert response.status_code == 200
        assert response.json() == {"d": 30, "n": 400, "m": 400, "version": 1}

    def test_feature_mismatch_400(self, client):
        rng = np.random.default_rng(0)
        response = upload(client, rng.standard_normal((5, 30)), rng.standard_normal((5, 29)))
        assert response.status_code == 400
        assert "target has 30 features, background has 29" in response.json()["detail"]

    def test_version_increments_and_cache_invalidates(self, client):
        rng = np.random.default_rng(1)
        t, b = rng.standard_normal((10, 4)), rng.standard_normal((10, 4))
        assert upload(client, t, b).json()["version"] == 1
        first = client.get("/sweep", params={"grid": "0.5:5:4", "k": 2, "p": 2, "seed": 0})
        assert first.status_code == 200
        assert upload(client, t + 1.0, b).json()["version"] == 2
        second = client.get("/sweep", params={"grid": "0.5:5:4", "k": 2, "p": 2, "seed": 0})
        assert second.headers["X-Cache"] == "miss"
        assert second.json()["version"] == 2

    def test_bad_csv_400(self, client):
        files = {
            "target": ("t.csv", b"1,2\n3\n", "text/csv"),
            "background": ("b.csv", b"1,2\n3,4\n", "text/csv"),
        }
        response = client.post("/datasets", files=files)
        assert response.status_code == 400
        assert "row 2" in response.json()["detail"]

    def test_upload_cap_413(self):
        client = TestClient(create_app(max_upload_bytes=100))
        rng = np.random.default_rng(2)
        response = upload(client, rng.standard_normal((50, 10)), rng.standard_normal((5, 10)))
        assert response.status_code == 413


class TestEmbedding:
    def test_409_before_upload(self, client):
        assert client.get("/embedding", params={"alpha": "1"}).status_code == 409

    def test_alpha_zero_matches_pca_oracle(self, client):
        rng = np.random.default_rng(3)
        t, b = rng.standard_normal((30, 5)), rng.standard_normal((25, 5))
        upload(client, t, b)
        points = np.array(client.get("/embedding", params={"alpha": "0", "k": 2}).json()["points"])
        centered = t - t.mean(axis=0)
        _, _, vh = np.linalg.svd(centered, full_matrices=False)
        expected = centered @ vh[:2].T
        for c in range(2):
            err = min(np.linalg.norm(points[:, c] - expected[:, c]),
                      np.linalg.norm(points[:, c] + expected[:, c]))
            assert err <= 1e-8 * np.linalg.norm(expected[:, c])

    def test_alpha_inf_null_space(self, client):
        rng = np.random.default_rng(4)
        # background confined to the first two of four dimensions
        t = rng.standard_normal((30, 4))
        b = np.hstack([rng.standard_normal((20, 2)), np.zeros((20, 2))])
        upload(client, t, b)
        response = client.get("/embedding", params={"alpha": "inf", "k": 2})
        assert response.status_code == 200
        pairs = np.array(response.json()["variance_pairs"])
        assert np.all(pairs[:, 1] <= 1e-10)

    def test_toy_medoid_embedding_clusters(self, toy_client):
        sweep = toy_client.get("/sweep", params={"grid": "0.1:1000:40", "k": 2, "p": 3, "seed": 0}).json()
        mid = sweep["medoid_alphas"][1]
        payload = toy_client.get("/embedding", params={"alpha": repr(mid), "k": 2}).json()
        points = np.array(payload["points"])
        labels = np.array(payload["labels"])
        # group centroids well separated relative to scatter
        centroids = np.array([points[labels == g].mean(axis=0) for g in range(4)])
        spread = max(np.linalg.norm(points[labels == g] - centroids[g], axis=1).mean() for g in range(4))
        dists = [np.linalg.norm(centroids[i] - centroids[j]) for i in range(4) for j in range(i + 1, 4)]
        assert min(dists) > 2.0 * spread

    def test_include_background(self, toy_client):
        payload = toy_client.get("/embedding", params={"alpha": "1", "include_background": 1}).json()
        assert len(payload["background_points"]) == 400

    def test_422_bad_params(self, toy_client):
        assert toy_client.get("/embedding", params={"alpha": "-1"}).status_code == 422
        assert toy_client.get("/embedding", params={"alpha": "abc"}).status_code == 422
        assert toy_client.get("/embedding", params={"alpha": "1", "k": 31}).status_code == 422

    def test_cache_byte_identical(self, toy_client):
        first = toy_client.get("/embedding", params={"alpha": "2.5", "k": 2})
        assert first.headers["X-Cache"] == "miss"
        second = toy_client.get("/embedding", params={"alpha": "2.5", "k": 2})
        assert second.headers["X-Cache"] == "hit"
        assert second.content == first.content


class TestSweep:
    def test_default_grid_monotone_trace(self, toy_client):
        payload = toy_client.get("/sweep", params={"grid": "0.1:1000:40", "k": 2, "p": 3, "seed": 0}).json()
        pairs = np.array(payload["variance_pairs"])
        assert pairs.shape == (40, 2)
        assert np.all(np.diff(pairs[:, 0]) <= 1e-9)
        assert np.all(np.diff(pairs[:, 1]) <= 1e-9)
        assert len(payload["medoid_alphas"]) == 3
        assert np.array(payload["affinity"]).shape == (40, 40)

    def test_p_one_single_medoid(self, toy_client):
        payload = toy_client.get("/sweep", params={"grid": "0.5:50:6", "k": 2, "p": 1, "seed": 0}).json()
        assert len(payload["medoid_alphas"]) == 1
        assert set(payload["cluster_labels"]) == {0}

    def test_repeat_call_cached(self, toy_client):
        params = {"grid": "0.5:50:6", "k": 2, "p": 2, "seed": 1}
        first = toy_client.get("/sweep", params=params)
        second = toy_client.get("/sweep", params=params)
        assert first.headers["X-Cache"] == "miss"
        assert second.headers["X-Cache"] == "hit"
        assert second.content == first.content

    def test_bad_grid_422(self, toy_client):
        assert toy_client.get("/sweep", params={"grid": "oops"}).status_code == 422
        assert toy_client.get("/sweep", params={"grid": "5:1:10"}).status_code == 422
        assert toy_client.get("/sweep", params={"grid": "0.5:5:4", "p": 9}).status_code == 422


class TestWeights:
    def test_axis_component(self, client):
        # target covariance dominated by e1 at alpha=0
        t = np.array([[2.0, 0.0], [-2.0, 0.0], [1.0, 0.1], [-1.0, -0.1]])
        b = np.array([[0.1, 0.0], [-0.1, 0.0]])
        upload(client, t, b)
        w = client.get("/weights", params={"alpha": "0", "component": 0}).json()["weights"]
        assert w[0] == 1.0
        assert w[1] < 0.01

    def test_hand_arithmetic(self, client):
        v = np.array([0.6, 0.8])
        t = np.vstack([v, -v, 2 * v, -2 * v])
        b = np.array([[0.001, 0.0], [-0.001, 0.0]])
        upload(client, t, b)
        w = client.get("/weights", params={"alpha": "0", "component": 0}).json()["weights"]
        np.testing.assert_allclose(w, [0.5625, 1.0], atol=1e-12)

    def test_component_out_of_range_422(self, toy_client):
        assert toy_client.get("/weights", params={"alpha": "1", "component": 5}).status_code == 422


class TestLatency:
    def test_embedding_under_200ms(self, client):
        rng = np.random.default_rng(5)
        t, b = rng.standard_normal((5000, 100)), rng.standard_normal((5000, 100))
        upload(client, t, b)
        start = time.perf_counter()
        response = client.get("/embedding", params={"alpha": "3.7", "k": 2})
        elapsed = time.perf_counter() - start
        assert response.status_code == 200
        assert response.headers["X-Cache"] == "miss"
        assert elapsed < 0.2, f"embedding took {elapsed * 1000:.0f} ms"
