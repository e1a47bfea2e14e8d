import json
import math

import pytest

from configs import paths
from src.cli import main
from src.geometry import alpha_profile
from src.geometry.core import Body, CertificateFormatError, InvalidBodyError, Point2
from src.lemma import build_certificate, verify_certificate
from src.utils.body_loader import body_to_dict, load_body, load_certificate, parse_body, parse_certificate, same_body
from src.utils.serializers import dumps, frame_to_csv, round_sig, to_jsonable, write_json


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


# --- serializers / loaders ---

def test_round_sig_and_jsonable():
    assert round_sig(1.0 / 3.0) == 0.333333333333
    assert round_sig(0.0) == 0.0
    assert to_jsonable({"a": math.inf, "b": -math.inf, "c": (1, 2.0)}) == {"a": "inf", "b": "-inf", "c": [1, 2.0]}
    assert dumps({"x": 1}).endswith("}\n")


EXAMPLE_BODIES = [paths.SQUARE2_JSON, paths.DISC1_JSON, paths.STADIUM_JSON, paths.TRI_EQ_JSON,
                  paths.ROUNDED_TRIANGLE_JSON]


@pytest.mark.parametrize("source", EXAMPLE_BODIES, ids=lambda p: p.stem)
def test_body_round_trip_is_exact(tmp_path, source):
    body = load_body(source)
    path = tmp_path / "body.json"
    write_json(body_to_dict(body), path)
    again = load_body(path)
    assert body_to_dict(again) == body_to_dict(body)
    assert same_body(again, body)


def test_same_body_compares_at_written_precision(tri_eq, square2):
    nudged = Body(tuple(Point2(p.x * (1 + 1e-15), p.y) for p in tri_eq.core), tri_eq.rho)
    assert same_body(nudged, tri_eq)
    assert not same_body(square2, tri_eq)


def test_parse_body_errors():
    with pytest.raises(ValueError, match="body: field 'radius'"):
        parse_body({"core": [[0, 0]], "radius": -1})
    with pytest.raises(ValueError, match="body: field 'core'"):
        parse_body({"radius": 1})
    with pytest.raises(ValueError):
        parse_body({"core": [[0, 0]], "radius": 1, "extra": True})
    with pytest.raises(InvalidBodyError):
        parse_body({"core": [[-1, -1], [-1, 1], [1, 1], [1, -1]], "radius": 0})


def test_parse_certificate_rejects_missing_fields():
    with pytest.raises(CertificateFormatError, match="certificate: field"):
        parse_certificate({"k": 3})


def test_alpha_csv_header(square2, origin):
    text = frame_to_csv(alpha_profile(square2, origin, [1.0, 1.25]).to_frame())
    assert text.splitlines()[0] == "R,alpha"
    assert text.splitlines()[1] == "1,0"


# --- command line ---

def test_incircle_command(capsys):
    code, out, _ = _run(capsys, "incircle", "--body", str(paths.SQUARE2_JSON))
    assert code == 0
    payload = json.loads(out)
    assert payload["r"] == pytest.approx(1.0)
    assert payload["kind"] == "point"


def test_contact_and_bound_commands(capsys):
    code, out, _ = _run(capsys, "contact", "--body", str(paths.STADIUM_JSON), "--center", "0,0")
    assert code == 0
    report = json.loads(out)["reports"][0]
    assert report["lower_bound"] == pytest.approx(2.0)

    code, out, _ = _run(capsys, "bound", "--body", str(paths.STADIUM_JSON))
    assert code == 0
    payload = json.loads(out)
    assert payload["min_lower_bound"] == pytest.approx(2.0)
    assert payload["max_lower_bound"] == "inf"


def test_contact_rejects_bad_center(capsys):
    code, _, err = _run(capsys, "contact", "--body", str(paths.SQUARE2_JSON), "--center", "0.5,0")
    assert code == 2
    assert "not an incircle center" in err


def test_alpha_command_writes_csv(capsys, tmp_path):
    csv_path = tmp_path / "alpha.csv"
    code, out, _ = _run(capsys, "alpha", "--body", str(paths.SQUARE2_JSON), "--R", "1.5,1.25",
                        "--csv", str(csv_path))
    assert code == 0
    rows = json.loads(out)["rows"]
    assert [row["R"] for row in rows] == [1.25, 1.5]
    assert csv_path.read_text(encoding="utf-8").splitlines()[0] == "R,alpha"


def test_construct_then_verify(capsys, tmp_path):
    cert_path = tmp_path / "cert.json"
    code, out, _ = _run(capsys, "construct", "--body", str(paths.STADIUM_JSON), "--k", "2",
                        "--out", str(cert_path))
    assert code == 0
    summary = json.loads(out)
    assert summary["n"] == 8
    assert summary["verdict"] is True

    code, out, _ = _run(capsys, "verify", "--cert", str(cert_path))
    assert code == 0
    assert json.loads(out)["ok"] is True

    code, out, _ = _run(capsys, "verify", "--cert", str(cert_path), "--body", str(paths.SQUARE2_JSON))
    assert code == 1
    assert "body: file differs" in json.loads(out)["violations"][-1]


@pytest.mark.parametrize("source", [paths.TRI_EQ_JSON, paths.ROUNDED_TRIANGLE_JSON], ids=lambda p: p.stem)
def test_verify_accepts_the_body_it_was_built_from(capsys, tmp_path, source):
    cert_path = tmp_path / "cert.json"
    code, _, _ = _run(capsys, "construct", "--body", str(source), "--k", "2", "--out", str(cert_path))
    assert code == 0
    code, out, _ = _run(capsys, "verify", "--cert", str(cert_path), "--body", str(source))
    payload = json.loads(out)
    assert payload["violations"] == []
    assert code == 0


def test_construct_samples_flag(capsys, tmp_path):
    cert_path = tmp_path / "cert.json"
    code, out, _ = _run(capsys, "construct", "--body", str(paths.SQUARE2_JSON), "--k", "3",
                        "--subset-budget", "1000", "--samples", "25", "--seed", "5", "--out", str(cert_path))
    assert code == 0
    strategy = json.loads(out)["subset_strategy"]
    assert (strategy["mode"], strategy["count"], strategy["seed"]) == ("sampled", 25, 5)
    assert len(json.loads(cert_path.read_text(encoding="utf-8"))["subset_results"]) == 25


def test_disk_round_trip_gives_same_report(tmp_path, stadium):
    cert = build_certificate(stadium, 2)
    path = tmp_path / "cert.json"
    write_json(cert.to_dict(), path)
    assert dumps(verify_certificate(load_certificate(path)).to_dict()) == dumps(verify_certificate(cert).to_dict())


def test_tampered_certificate_fails_verify(capsys, tmp_path):
    cert_path = tmp_path / "cert.json"
    _run(capsys, "construct", "--body", str(paths.STADIUM_JSON), "--k", "2", "--out", str(cert_path))
    data = json.loads(cert_path.read_text(encoding="utf-8"))
    data["params"]["R"] = 0.5
    code, out, _ = _run(capsys, "verify", "--cert", _write(tmp_path, "bad.json", data))
    assert code == 1
    assert any(v.startswith("params") for v in json.loads(out)["violations"])


def test_construct_on_disc_fails(capsys, tmp_path):
    code, _, err = _run(capsys, "construct", "--body", str(paths.DISC1_JSON), "--k", "2", "--budget", "3",
                        "--out", str(tmp_path / "never.json"))
    assert code == 1
    assert "failed" in err
    assert not (tmp_path / "never.json").exists()


def test_input_errors_exit_2(capsys, tmp_path):
    code, _, _ = _run(capsys, "incircle", "--body", str(tmp_path / "missing.json"))
    assert code == 2

    bad = tmp_path / "broken.json"
    bad.write_text("{not json", encoding="utf-8")
    code, _, _ = _run(capsys, "incircle", "--body", str(bad))
    assert code == 2

    clockwise = _write(tmp_path, "cw.json", {"core": [[-1, -1], [-1, 1], [1, 1], [1, -1]], "radius": 0})
    code, _, err = _run(capsys, "incircle", "--body", clockwise)
    assert code == 2
    assert "counterclockwise" in err

    code, _, _ = _run(capsys)
    assert code == 2


def test_cover_command(capsys, tmp_path):
    pts = _write(tmp_path, "pts.json", {"points": [[0, 0], [1.5, 0]]})
    code, out, _ = _run(capsys, "cover", "--body", str(paths.SQUARE2_JSON), "--points", pts)
    assert code == 0
    payload = json.loads(out)
    assert payload["found"] is True
    assert payload["solver_agreement"] is True

    code, out, _ = _run(capsys, "cover", "--body", str(paths.SQUARE2_JSON), "--points", pts,
                        "--mode", "rigid", "--grid", "8")
    assert code == 0
    assert json.loads(out)["found"] is True


def test_helly_est_command(capsys, tmp_path):
    pts = _write(tmp_path, "pts.json", {"points": [[-1, -1], [1, -1], [1, 1], [-1, 1]]})
    code, out, _ = _run(capsys, "helly-est", "--body", str(paths.SQUARE2_JSON), "--points", pts)
    assert code == 0
    assert json.loads(out)["k_max"] == 4


def test_plot_body_and_marking(capsys, tmp_path):
    svg = tmp_path / "square.svg"
    code, _, _ = _run(capsys, "plot", "--body", str(paths.SQUARE2_JSON), "--R", "1.25", "--out", str(svg))
    assert code == 0
    text = svg.read_text(encoding="utf-8")
    assert text.count('class="body"') == 1
    assert text.count('class="incircle"') == 1
    assert text.count('class="marked"') == 4

    svg = tmp_path / "stadium.svg"
    code, _, _ = _run(capsys, "plot", "--body", str(paths.STADIUM_JSON), "--out", str(svg))
    assert code == 0
    assert " A " in svg.read_text(encoding="utf-8")


def test_plot_certificate(capsys, tmp_path):
    cert_path = tmp_path / "cert.json"
    _run(capsys, "construct", "--body", str(paths.STADIUM_JSON), "--k", "2", "--out", str(cert_path))
    svg = tmp_path / "cert.svg"
    code, _, _ = _run(capsys, "plot", "--cert", str(cert_path), "--out", str(svg))
    assert code == 0
    assert svg.read_text(encoding="utf-8").count('class="point"') == 8


def test_plot_needs_a_source(capsys, tmp_path):
    code, _, _ = _run(capsys, "plot", "--out", str(tmp_path / "x.svg"))
    assert code == 2
