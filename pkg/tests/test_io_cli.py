import csv
import io
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from rigidity_forge import io as cio
from rigidity_forge.certify import abelian_decompose, circulant_decompose, gwh_decompose, verify
from rigidity_forge.cli import main
from rigidity_forge.fields import cyclotomic, finite_field, prime_field
from rigidity_forge.linalg import ExactMatrix
from rigidity_forge.structured import realize
from rigidity_forge.sweep import HEADER, parse_range, rows_to_csv, run_sweep


def _certs():
    return [
        gwh_decompose(2, 4, 1),
        gwh_decompose(3, 3, 1),
        circulant_decompose([1, 2, 3], cyclotomic(3)),
        circulant_decompose([1, 2, 3, 4], prime_field(7), ambient=15),
        abelian_decompose([2, 4], [1, 2, 3, 4, 5, 6, 0, 1], prime_field(7)),
    ]


@pytest.mark.parametrize("cert", _certs(), ids=lambda c: c.matrix.kind)
def test_round_trip(cert):
    data = cio.serialize(cert)
    back = cio.parse(data)
    assert back.field == cert.field
    assert realize(back.matrix) == realize(cert.matrix)
    assert back.changes.to_dense() == cert.changes.to_dense()
    assert (back.claimed_rank, back.claimed_regular_sparsity) == (cert.claimed_rank, cert.claimed_regular_sparsity)
    assert verify(back).passed
    assert cio.serialize(back) == data  # stable encoding
    assert data.endswith(b"\n")


def test_integers_are_decimal_strings():
    obj = json.loads(cio.serialize(gwh_decompose(2, 3, 1)))
    assert obj["version"] == "1"
    assert isinstance(obj["claimed_rank"], str) and isinstance(obj["shape"][0], str)
    for i, j, v in obj["changes"]:
        assert isinstance(i, str) and all("/" in c for c in v)


@settings(max_examples=30)
@given(st.integers(0, 6), st.data())
def test_element_round_trip(which, data):
    F = [cyclotomic(1), cyclotomic(5), cyclotomic(12), prime_field(7), finite_field(3, 3), finite_field(2, 4),
         finite_field(11, 2)][which]
    if F.is_finite:
        coeffs = data.draw(st.lists(st.integers(0, F.p - 1), min_size=F.degree, max_size=F.degree))
    else:
        coeffs = data.draw(st.lists(st.fractions(max_denominator=50), min_size=F.degree, max_size=F.degree))
    x = F.element(coeffs)
    assert cio.decode_element(cio.encode_element(x), F, "x") == x
    assert cio.decode_field(cio.encode_field(F)) == F


def test_matrix_file_round_trip():
    F = finite_field(5, 2)
    M = ExactMatrix.from_rows(F, [[F.gen, F.one], [F.zero, F.gen * 3]])
    assert cio.matrix_from_dict(json.loads(json.dumps(cio.matrix_to_dict(M)))) == M


@pytest.mark.parametrize("mutate,needle", [
    (lambda o: o.update(version="2"), "version"),
    (lambda o: o.pop("field"), "field"),
    (lambda o: o["changes"].append(["0", "99", o["changes"][0][2]]), "changes"),
    (lambda o: o["changes"][0].__setitem__(2, ["x"]), "changes[0][2]"),
    (lambda o: o.update(claimed_rank=3), "claimed_rank"),
])
def test_parse_errors_name_positions(mutate, needle):
    obj = json.loads(cio.serialize(gwh_decompose(2, 3, 1)))
    mutate(obj)
    with pytest.raises(cio.CertificateFormatError) as exc:
        cio.parse(json.dumps(obj))
    assert needle in str(exc.value)


def test_truncated_json_reports_line():
    data = cio.serialize(gwh_decompose(2, 3, 1))
    with pytest.raises(cio.CertificateFormatError) as exc:
        cio.parse(data[:200])
    assert "line" in str(exc.value)


# --- CLI ---------------------------------------------------------------------


def test_cli_certify_then_verify(tmp_path, capsys):
    out = tmp_path / "h.json"
    assert main(["certify", "gwh", "--d", "2", "--n", "4", "--m", "1", "-o", str(out)]) == 0
    assert main(["verify", str(out)]) == 0
    assert "verified" in capsys.readouterr().out


def test_cli_circulant_and_abelian(tmp_path):
    vals = tmp_path / "v.txt"
    vals.write_text("1 2 3 1/2")
    assert main(["certify", "circulant", "--top-row", str(vals), "--field", "cyclotomic:1", "-o", str(tmp_path / "c.json")]) == 0
    assert main(["verify", str(tmp_path / "c.json")]) == 0
    f = tmp_path / "f.json"
    f.write_text(json.dumps([1, 0, 2, 3, 1, 1]))
    assert main(["certify", "abelian", "--factors", "2,3", "--f", str(f), "--field", "fq:7", "-o", str(tmp_path / "a.json")]) == 0
    assert main(["verify", str(tmp_path / "a.json")]) == 0


def test_cli_verify_against_matrix_file(tmp_path):
    cert = gwh_decompose(2, 3, 1)
    cio.save(cert, tmp_path / "c.json")
    M = realize(cert.matrix)
    (tmp_path / "m.json").write_text(json.dumps(cio.matrix_to_dict(M)))
    assert main(["verify", str(tmp_path / "c.json"), "--matrix-file", str(tmp_path / "m.json")]) == 0
    smaller = M.take(list(range(4)), list(range(4)))
    (tmp_path / "m2.json").write_text(json.dumps(cio.matrix_to_dict(smaller)))
    assert main(["verify", str(tmp_path / "c.json"), "--matrix-file", str(tmp_path / "m2.json")]) == 1


def test_cli_exit_codes(tmp_path):
    cert = gwh_decompose(2, 3, 1)
    good = tmp_path / "g.json"
    cio.save(cert, good)
    obj = json.loads(good.read_text())
    obj["claimed_rank"] = "0"
    (tmp_path / "r.json").write_text(json.dumps(obj))
    assert main(["verify", str(tmp_path / "r.json")]) == 1
    (tmp_path / "t.json").write_bytes(good.read_bytes()[:100])
    assert main(["verify", str(tmp_path / "t.json")]) == 2
    assert main(["verify", str(tmp_path / "missing.json")]) == 2
    assert main(["verify", str(good), "--bogus"]) == 2
    assert main([]) == 2
    assert main(["certify", "gwh", "--d", "3", "--n", "3", "--m", "1", "--field", "fq:3"]) == 3
    assert main(["certify", "gwh", "--d", "2", "--n", "3", "--m", "1", "--field", "nonsense"]) == 2
    assert main(["certify", "gwh", "--d", "2", "--n", "3", "--m", "3"]) == 3


def test_cli_numtheory(capsys):
    assert main(["numtheory", "good-primes", "--lower", "10", "--upper", "100", "--max-pp", "10"]) == 0
    primes = [int(x) for x in capsys.readouterr().out.split()]
    assert 17 not in primes and 41 in primes
    assert main(["numtheory", "pi", "--a", "1", "--x", "50", "--y", "5"]) == 0
    assert capsys.readouterr().out.strip() == "11"
    assert main(["numtheory", "scales", "--K", "100"]) == 0
    assert capsys.readouterr().out.startswith("N=")
    assert main(["numtheory", "factorable", "--lower", "10", "--upper", "20", "--max-pp", "10", "--l", "50"]) == 3


def test_cli_sweep(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["sweep", "--family", "gwh", "--range", "2:4", "--param", "d=2", "--param", "m=1", "--workers", "1",
                 "--csv", str(out)]) == 0
    rows = list(csv.reader(io.StringIO(out.read_text())))
    assert rows[0] == HEADER
    assert [int(r[1]) for r in rows[1:]] == [4, 8, 16]
    assert main(["sweep", "--family", "gwh", "--range", "x:y"]) == 2


def test_sweep_parallel_matches_serial():
    serial = run_sweep("circulant", [3, 4, 5], {"seed": "1"}, None, 1)
    par = run_sweep("circulant", [3, 4, 5], {"seed": "1"}, None, 2)
    key = lambda r: (r.family, r.N, r.params, r.rank, r.row_s, r.col_s, r.field_order)
    assert [key(r) for r in serial] == [key(r) for r in par]
    assert rows_to_csv(serial).splitlines()[0] == ",".join(HEADER)
    assert parse_range("1:7:3") == [1, 4, 7] and parse_range("2,5") == [2, 5]


def test_module_entry_point(tmp_path):
    env = dict(os.environ)
    env["PYTHONPATH"] = str(Path(__file__).resolve().parent.parent / "src") + os.pathsep + env.get("PYTHONPATH", "")
    out = tmp_path / "d.json"
    p = subprocess.run([sys.executable, "-m", "rigidity_forge", "certify", "dft", "--N", "15", "-o", str(out)],
                       capture_output=True, text=True, env=env)
    assert p.returncode == 0, p.stderr
    p = subprocess.run([sys.executable, "-m", "rigidity_forge", "verify", str(out)], capture_output=True, text=True, env=env)
    assert p.returncode == 0 and "verified" in p.stdout
