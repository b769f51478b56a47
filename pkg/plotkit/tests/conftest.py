import json
import shutil
import subprocess

import pytest


@pytest.fixture(scope="session")
def scenario_dir(tmp_path_factory):
    """Default-scenario data files, produced through the simulation CLI.

    plotkit only consumes the exported file formats, so the files are
    generated by invoking the external command; skip if it is absent.
    """
    exe = shutil.which("steerlab")
    if exe is None:
        pytest.skip("steerlab CLI not installed")
    out = tmp_path_factory.mktemp("scenario")
    subprocess.run([exe, "figures", "--out", str(out)], check=True, capture_output=True)
    return out


@pytest.fixture
def tiny_csv(tmp_path):
    path = tmp_path / "tiny.csv"
    lines = ["t,N,p,s1,s2,s3,center_z,msc"]
    for n, decay in ((1, 0.2), (3, 0.5), (6, 0.8)):
        for k in range(6):
            t = 0.4 * k
            msc = 0.75 * (decay + (1 - decay) * (1.0 / (1.0 + t)))
            lines.append(f"{t},{n},{0.9},{msc},{msc},{0.5 * msc},{0.1},{msc}")
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def tiny_mesh(tmp_path):
    """Two-frame mesh file: a small ellipsoid and a point, both for N=1."""
    path = tmp_path / "tiny.json"
    frames = []
    for t, s in ((0.0, 0.5), (0.8, 0.0)):
        points = []
        for i in range(32):
            for j in range(64):
                theta = 3.141592653589793 * i / 31
                phi = 2 * 3.141592653589793 * j / 64
                import math

                points.append(
                    [s * math.sin(theta) * math.cos(phi),
                     s * math.sin(theta) * math.sin(phi),
                     0.2 + s * math.cos(theta)]
                )
        frames.append(
            {
                "t": t,
                "N": 1,
                "center": [0.0, 0.0, 0.2],
                "semiaxes": [s, s, s],
                "orientation": [1, 0, 0, 0, 1, 0, 0, 0, 1],
                "points": points,
            }
        )
    path.write_text(json.dumps(frames))
    return path
