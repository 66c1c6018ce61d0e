import json

from app.geometry.canonical import sphere_s1_cube
from app.io.cube_file import dumps_cube


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "healthy", "service": "DupinCube"}


def test_system_info(client):
    data = client.get("/api/v1/system/info").json()
    assert data["app_name"] == "DupinCube"
    assert "uptime" in data
    assert data["cube_schema_version"] == 1


def test_list_families(client):
    families = client.get("/api/v1/families").json()
    labels = [f["label"] for f in families]
    assert "A" in labels and "S1" in labels
    a = next(f for f in families if f["label"] == "A")
    assert a["parameters"] == ["a", "b", "c"]
    assert a["defaults"] == [1.0, 2.0, 3.0]


def test_build_cube(client):
    response = client.post("/api/v1/cubes/build", json={"family": "A", "params": [1, 2, 3]})
    assert response.status_code == 200
    data = response.json()
    assert data["cube"]["entries"][7] == [6.0, 1.0, 1.0, 1.0, 1.0, -2.0, -3.0, -1.0]
    assert data["control_points"][1] == "1i"
    assert abs(data["sigma"]["s"][1] - 4.0) < 1e-12
    assert data["expected"].startswith("A1")


def test_build_errors(client):
    assert client.post("/api/v1/cubes/build", json={"family": "Nope"}).status_code == 404
    response = client.post("/api/v1/cubes/build", json={"family": "A", "params": [1]})
    assert response.status_code == 400
    assert response.json()["error"] == "InvalidParameter"


def test_classify_cube(client):
    cube = json.loads(dumps_cube(sphere_s1_cube(0.5), family="S1"))
    response = client.post("/api/v1/cubes/classify", json=cube)
    assert response.status_code == 200
    report = response.json()
    assert report["subtype"] == "S1"
    assert report["source"] == "S1"
    assert set(report["sigma"]) == {"s", "t", "u"}


def test_classify_rejects_bad_nets(client):
    cube = json.loads(dumps_cube(sphere_s1_cube(0.5)))
    cube["entries"] = cube["entries"][:5]
    assert client.post("/api/v1/cubes/classify", json=cube).status_code == 422

    cube = json.loads(dumps_cube(sphere_s1_cube(0.5)))
    cube["entries"][3][0] += 1e-3
    response = client.post("/api/v1/cubes/classify", json=cube)
    assert response.status_code == 400
    assert response.json()["error"] == "InvariantViolation"


def test_upload_cube(client):
    content = dumps_cube(sphere_s1_cube(0.5)).encode()
    response = client.post(
        "/api/v1/cubes/upload",
        files={"file": ("s1.json", content, "application/json")},
    )
    assert response.status_code == 200
    assert response.json()["source"] == "s1.json"
    assert response.json()["label"] == "S1"
