"""unit tests for the http api"""

import math
from unittest.mock import patch

import httpx
import pytest

from xychain import __version__
from xychain.main import app

SMALL_SWEEP = {
    "coupling": 1.0,
    "field": 0.1,
    "t_max": 4.0,
    "t_steps": 5,
    "gamma_steps": 3,
}


@pytest.fixture
async def client():
    transport = httpx.ASGITransport(app=app)
    async with httpx.AsyncClient(transport=transport, base_url="http://test") as http:
        yield http


@pytest.mark.asyncio
class TestEndpoints:
    """test cases for the api endpoints"""

    async def test_health(self, client):
        """test health check"""
        response = await client.get("/health")
        assert response.status_code == 200
        assert response.json() == {"status": "healthy", "version": __version__}

    async def test_root_lists_endpoints(self, client):
        """test root endpoint map"""
        response = await client.get("/")
        assert set(response.json()["endpoints"]) >= {"point", "sweep", "peaks", "verify"}

    async def test_presets(self, client):
        """test the three regime presets"""
        response = await client.get("/presets")
        assert response.json()["weak"] == {"field": 0.1, "coupling": 1.0}

    async def test_point(self, client):
        """test a zero-time point returns F = alpha"""
        response = await client.post(
            "/point", json={"coupling": 1.0, "anisotropy": 0.5, "field": 0.1, "t": 0.0}
        )
        assert response.status_code == 200
        assert response.json()["fidelity"] == pytest.approx(math.sqrt(3.0) / 2.0, abs=1e-12)

    async def test_point_bad_receiver(self, client):
        """test r > N is a 400"""
        response = await client.post(
            "/point", json={"coupling": 1.0, "anisotropy": 0.5, "field": 0.1, "t": 1.0, "receiver": 9}
        )
        assert response.status_code == 400
        assert "receiver" in response.json()["detail"]

    async def test_point_schema_error(self, client):
        """test a missing time fails request validation"""
        response = await client.post("/point", json={"coupling": 1.0, "anisotropy": 0.5, "field": 0.1})
        assert response.status_code == 422

    async def test_point_negative_time(self, client):
        """test a negative time is evaluated backward"""
        response = await client.post(
            "/point", json={"coupling": 1.0, "anisotropy": 0.5, "field": 0.1, "t": -3.0}
        )
        assert response.status_code == 200
        assert response.json()["t"] == -3.0

    @patch("xychain.main.sweep_service.run_point", side_effect=RuntimeError("boom"))
    async def test_point_internal_error(self, mock_run_point, client):
        """test unexpected failures are a 500"""
        response = await client.post(
            "/point", json={"coupling": 1.0, "anisotropy": 0.5, "field": 0.1, "t": 1.0}
        )
        assert response.status_code == 500
        assert "boom" in response.json()["detail"]
        mock_run_point.assert_called_once()

    async def test_sweep_and_peaks(self, client):
        """test a small sweep and peak finding on its result"""
        response = await client.post("/sweep", json=SMALL_SWEEP)
        assert response.status_code == 200
        result = response.json()
        assert len(result["rows"]) == 15
        assert result["metadata"]["t_steps"] == 5

        response = await client.post("/peaks", json={"result": result, "top_k": 2})
        assert response.status_code == 200
        assert len(response.json()) <= 2

        response = await client.post(
            "/peaks", json={"result": result, "first_along_t": True, "gamma": 0.5, "quantity": "tangle"}
        )
        assert response.status_code == 200
        assert len(response.json()) <= 1

    async def test_sweep_too_large(self, client):
        """test grids above the cell limit are a 400"""
        response = await client.post("/sweep", json={**SMALL_SWEEP, "t_steps": 1000, "gamma_steps": 1000})
        assert response.status_code == 400
        assert "exceeds" in response.json()["detail"]

    async def test_sweep_bad_range(self, client):
        """test an out-of-range gamma grid is a 400"""
        response = await client.post("/sweep", json={**SMALL_SWEEP, "gamma_max": 2.0})
        assert response.status_code == 400

    async def test_verify(self, client):
        """test a small verification passes"""
        response = await client.post(
            "/verify", json={"n_sites": 3, "coupling": 1.0, "field": 0.1, "receiver": 2, "points": 3}
        )
        assert response.status_code == 200
        report = response.json()
        assert report["passed"] is True
        assert set(report["max_deviations"]) == {"sx", "sy", "sz", "tangle", "fidelity"}

    async def test_verify_size_guard(self, client):
        """test N above the verification limit is a 400"""
        response = await client.post(
            "/verify", json={"n_sites": 12, "coupling": 1.0, "field": 0.1, "points": 1}
        )
        assert response.status_code == 400
