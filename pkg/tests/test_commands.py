import json
from io import StringIO

import pytest
from django.apps import apps
from django.core.management import call_command
from django.core.management.base import CommandError

from fi_koszul import FIKoszulApp
from fi_koszul.exactla import prime_field
from fi_koszul.exceptions import ComplexError, InternalConsistencyError
from fi_koszul.ficore import Representation, atom_module, free_module, truncate_above
from fi_koszul.forms import WindowForm
from fi_koszul.fihom import CoverStrategy
from fi_koszul.koszul import SignConvention
from fi_koszul.serialization import load_module_file, module_to_dict, save_module_file


def run(*args, **options):
    out = StringIO()
    call_command(*args, stdout=out, **options)
    return out.getvalue()


@pytest.fixture
def module_file(tmp_path):
    def write(V, name="module.json"):
        path = str(tmp_path / name)
        save_module_file(V, path)
        return path

    return write


def test_make(tmp_path):
    path = str(tmp_path / "const.json")
    output = run("make", "truncate", "1", "(free 0)", N=5, out=path)
    assert "Wrote" in output
    V = load_module_file(path)
    assert V == truncate_above(free_module(0, 5), 1)
    assert V.note == "truncate 1 (free 0)"


def test_make_with_note_and_field(tmp_path):
    path = str(tmp_path / "atom.json")
    run("make", "atom 2 sign", N=4, field="Fp:3", note="sign atom", out=path)
    V = load_module_file(path)
    assert V == atom_module(2, Representation.SIGN, 4, prime_field(3))
    assert V.note == "sign atom"


def test_make_rejects_bad_expressions(tmp_path):
    with pytest.raises(CommandError) as excinfo:
        run("make", "cube", out=str(tmp_path / "x.json"))
    assert excinfo.value.returncode == 2


def test_make_rejects_invalid_modules(tmp_path):
    data = module_to_dict(atom_module(2, Representation.TRIVIAL, 2))
    data["transpositions"]["2"]["1"] = [["2"]]
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(data))
    with pytest.raises(CommandError) as excinfo:
        run("make", "load", str(path), out=str(tmp_path / "copy.json"))
    assert excinfo.value.returncode == 1
    assert not (tmp_path / "copy.json").exists()


def test_koszul_text(module_file, constant_q1):
    output = run("koszul", module_file(constant_q1), amax=2)
    lines = output.splitlines()
    assert lines[0] == "Koszul homology over Q, a <= 2, n <= 5"
    assert lines[1].split() == ["a/n", "0", "1", "2", "3", "4", "5"]
    assert lines[2].split() == ["0", "1", "0", "0", "0", "0", "0"]
    assert lines[3].split()[:4] == ["1", "0", "0", "1"]


def test_koszul_json_and_csv(module_file, constant_q1):
    data = json.loads(run("koszul", module_file(constant_q1), amax=2, nmax=3, output_format="json"))
    assert data["kind"] == "koszul"
    assert data["entries"] == [[1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 2]]
    csv = run("koszul", module_file(constant_q1), amax=1, nmax=2, output_format="csv")
    assert csv == "a,0,1,2\n0,1,0,0\n1,0,0,1\n"


def test_koszul_writes_files(module_file, constant_q1, tmp_path):
    out = str(tmp_path / "table.json")
    assert run("koszul", module_file(constant_q1), amax=1, output_format="json", out=out) == ""
    with open(out) as f:
        assert json.load(f)["a_max"] == 1


def test_fihom(module_file, atom_trivial_1):
    data = json.loads(run("fihom", module_file(atom_trivial_1), amax=2, nmax=4, output_format="json", seed=3))
    assert data["kind"] == "tor"
    assert data["entries"][1][2] == 2
    assert data["entries"][2][3] == 3


def test_fihom_ceiling(module_file, atom_trivial_1):
    with pytest.raises(CommandError) as excinfo:
        run("fihom", module_file(atom_trivial_1), amax=2, ceiling=2)
    assert excinfo.value.returncode == 2


def test_compare(module_file, constant_q1):
    output = run("compare", module_file(constant_q1), amax=2, nmax=4, cover="basis")
    assert "Koszul homology over Q" in output
    assert "FI-homology over Q" in output
    assert "Tables agree in every cell." in output


def test_compare_with_expected_table(module_file, constant_q1, tmp_path):
    path = module_file(constant_q1)
    expected = str(tmp_path / "expected.json")
    run("koszul", path, amax=2, nmax=4, output_format="json", out=expected)
    output = run("compare", path, amax=2, nmax=4, expected=expected)
    assert "Expected table agrees in every cell." in output

    with open(expected) as f:
        data = json.load(f)
    data["entries"][1][2] = 7
    with open(expected, "w") as f:
        json.dump(data, f)
    with pytest.raises(CommandError) as excinfo:
        run("compare", path, amax=2, nmax=4, expected=expected)
    assert excinfo.value.returncode == 1


def test_compare_json(module_file, constant_q1):
    data = json.loads(run("compare", module_file(constant_q1), amax=1, nmax=3, output_format="json"))
    assert data["kind"] == "compare"
    assert data["verdicts"]["equal"] is True
    assert data["entries"] == data["tor_entries"]


def test_regularity(module_file):
    path = module_file(atom_module(2, Representation.TRIVIAL, 3))
    output = run("regularity", path, amax=3, N=6)
    assert "deg V = 2, a <= 3" in output
    assert "reg_observed = 2" in output
    assert "bound_ok = yes" in output
    assert output.rstrip().endswith("reg_observed == deg")


def test_regularity_json(module_file, constant_q1):
    data = json.loads(run("regularity", module_file(constant_q1), amax=3, output_format="json"))
    assert data["verdicts"]["verdict"] == "reg_observed == deg"
    assert data["verdicts"]["certificate_a"] == 1


@pytest.mark.parametrize("V,options", [
    (atom_module(2, Representation.TRIVIAL, 4), {"amax": 3}),
    (free_module(1, 6), {"amax": 2}),
])
def test_regularity_usage_errors(module_file, V, options):
    with pytest.raises(CommandError) as excinfo:
        run("regularity", module_file(V), **options)
    assert excinfo.value.returncode == 2


def test_padding_a_nonzero_top_degree_is_refused(module_file):
    with pytest.raises(CommandError) as excinfo:
        run("regularity", module_file(free_module(0, 3)), amax=1, N=6)
    assert excinfo.value.returncode == 2


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(CommandError) as excinfo:
        run("koszul", str(tmp_path / "missing.json"))
    assert excinfo.value.returncode == 2
    garbage = tmp_path / "garbage.json"
    garbage.write_text("{}")
    with pytest.raises(CommandError) as excinfo:
        run("koszul", str(garbage))
    assert excinfo.value.returncode == 2


def test_window_form_defaults(settings):
    settings.FI_KOSZUL_COVER_STRATEGY = "basis"
    form = WindowForm({"amax": 2})
    assert form.is_valid()
    assert form.cleaned_data["amax"] == 2
    assert form.cleaned_data["N"] == settings.FI_KOSZUL_WINDOW
    assert form.cleaned_data["field"] is None
    assert form.cleaned_data["cover"] is CoverStrategy.BASIS
    assert form.cleaned_data["sign_convention"] is SignConvention.PAPER


def test_window_form_errors():
    form = WindowForm({"N": 3, "nmax": 5, "field": "Fp:6", "amax": -1})
    assert not form.is_valid()
    assert set(form.errors) == {"nmax", "field", "amax"}
    assert "field:" in form.error_text()


def test_invalid_window_options(module_file, constant_q1):
    with pytest.raises(CommandError) as excinfo:
        run("koszul", module_file(constant_q1), amax=-1)
    assert excinfo.value.returncode == 2


def test_selftest_command_reports_failures():
    with pytest.raises(CommandError) as excinfo:
        run("selftest", "--quick", "--skip-relation", "swap-triviality")
    assert excinfo.value.returncode == 1
    assert "Criterion 5" in str(excinfo.value)


@pytest.mark.parametrize("error", [
    ComplexError("maps do not chain"),
    InternalConsistencyError("cover is not surjective"),
])
def test_library_failures_become_command_errors(module_file, constant_q1, monkeypatch, caplog, error):
    def fail(*args, **kwargs):
        raise error

    monkeypatch.setattr("fi_koszul.management.commands.koszul.koszul_homology_table", fail)
    with pytest.raises(CommandError) as excinfo:
        run("koszul", module_file(constant_q1), amax=2)
    assert excinfo.value.returncode == 1
    assert str(error) in str(excinfo.value)
    assert type(error).__name__ in caplog.text


def test_app_config_is_installed():
    config = apps.get_app_config("fi_koszul")
    assert isinstance(config, FIKoszulApp)
    assert str(config.verbose_name) == "Koszul complexes and FI-homology"
