"""Driving the command-line front end through its in-process entry point."""

from __future__ import annotations

import io
import json

import pytest

from prefacer.cli import (
    EXIT_COMPOSITION,
    EXIT_DIAGNOSTICS,
    EXIT_OK,
    EXIT_USAGE,
    RunConfig,
    main,
    run,
)

BAD_MODEL = "model m\n  class X specializes Ghost { }\n"


def cli(config: RunConfig) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    code = run(config, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def config_for(sample_dir, command: str, **overrides) -> RunConfig:
    preface_dir, root, model_path = sample_dir
    settings = dict(command=command, preface_dir=str(preface_dir),
                    root_package=root, model_path=str(model_path))
    settings.update(overrides)
    return RunConfig(**settings)


# ---------------------------------------------------------------------------
# Happy paths
# ---------------------------------------------------------------------------


def test_compose_prints_the_report(sample_dir):
    code, out, err = cli(config_for(sample_dir, "compose"))
    assert code == EXIT_OK
    assert err == ""
    assert "  max = 8 (project-p, overrides uml-core: 10)" in out
    assert "packages\n  uml-core\n  client-c\n  project-p\n" in out


def test_compose_output_is_deterministic(sample_dir):
    first = cli(config_for(sample_dir, "compose"))
    second = cli(config_for(sample_dir, "compose"))
    assert first == second


def test_validate_clean_model(sample_dir):
    code, out, err = cli(config_for(sample_dir, "validate"))
    assert code == EXIT_OK
    assert out == "0 errors, 0 warnings\n"
    assert err == ""


def test_explain_marks_the_winner(sample_dir):
    code, out, err = cli(config_for(sample_dir, "explain", key="max"))
    assert code == EXIT_OK
    assert out == "max\n  uml-core: 10\n  project-p: 8 (winner)\n"


def test_explain_catalogue_default(sample_dir):
    code, out, _ = cli(config_for(sample_dir, "explain", key="statechart.attach_to"))
    assert code == EXIT_OK
    assert out == 'statechart.attach_to\n  catalogue-default: "class" (winner)\n'


def test_explain_unknown_key(sample_dir):
    code, out, err = cli(config_for(sample_dir, "explain", key="ghost"))
    assert code == EXIT_DIAGNOSTICS
    assert out == ""
    assert err.startswith("error:")
    assert "ghost" in err


def test_transform_prints_model_and_report(sample_dir):
    code, out, err = cli(config_for(sample_dir, "transform"))
    assert code == EXIT_OK
    assert "// induced by statechart-to-class" in out
    assert "induced attributes" in err
    assert "induced invariants" in err


def test_transform_output_flag_writes_a_file(sample_dir, tmp_path):
    target = tmp_path / "out.model"
    code, out, _ = cli(config_for(sample_dir, "transform", output=str(target)))
    assert code == EXIT_OK
    assert out == ""
    assert "// induced by statechart-to-class" in target.read_text()


def test_skeleton_writes_files(sample_dir, tmp_path):
    out_dir = tmp_path / "gen"
    code, out, err = cli(config_for(sample_dir, "skeleton", output=str(out_dir)))
    assert code == EXIT_OK
    assert err == ""
    assert sorted(p.name for p in out_dir.iterdir()) == ["C.monitor", "C.skel"]
    assert out.splitlines() == [
        f"wrote {out_dir / 'C.skel'}",
        f"wrote {out_dir / 'C.monitor'}",
    ]
    skel = (out_dir / "C.skel").read_text()
    assert skel.startswith("// framing.default = unconstrained\n")
    assert "CLASS C" in skel
    assert "ASSERT" in (out_dir / "C.monitor").read_text()


def test_warnings_do_not_fail_the_run(sample_dir, tmp_path):
    preface_dir, _, model_path = sample_dir
    (preface_dir / "method-root.preface").write_text(
        'package "method-root" {\n'
        '  import "project-p"\n'
        '  option statechart.attach_to = method\n'
        '}\n')
    code, out, err = cli(RunConfig(
        "validate", str(preface_dir), "method-root", model_path=str(model_path)))
    assert code == EXIT_OK
    assert out == "0 errors, 1 warnings\n"
    assert err.startswith("warning W205 ")
    assert " SC: " in err


# ---------------------------------------------------------------------------
# Diagnostics and exit codes
# ---------------------------------------------------------------------------


def test_model_errors_exit_one(sample_dir, tmp_path):
    bad = tmp_path / "bad.model"
    bad.write_text(BAD_MODEL)
    code, out, err = cli(config_for(sample_dir, "validate", model_path=str(bad)))
    assert code == EXIT_DIAGNOSTICS
    assert out == "1 errors, 0 warnings\n"
    assert err.startswith("error E007 ")
    assert "Ghost" in err


def test_transform_refuses_a_broken_model(sample_dir, tmp_path):
    bad = tmp_path / "bad.model"
    bad.write_text(BAD_MODEL)
    code, out, err = cli(config_for(sample_dir, "transform", model_path=str(bad)))
    assert code == EXIT_DIAGNOSTICS
    assert out == ""
    assert "E007" in err


def test_duplicate_package_id_is_reported(sample_dir):
    preface_dir, _, _ = sample_dir
    original = (preface_dir / "uml-core.preface").read_text()
    (preface_dir / "zzz-copy.preface").write_text(original)
    code, _, err = cli(config_for(sample_dir, "compose"))
    assert code == EXIT_DIAGNOSTICS
    assert "E108" in err
    assert "uml-core" in err


def test_missing_preface_directory_exits_two(tmp_path):
    code, out, err = cli(RunConfig("compose", str(tmp_path / "void"), "x"))
    assert code == EXIT_USAGE
    assert "is not a directory" in err


def test_empty_preface_directory_exits_two(tmp_path):
    code, _, err = cli(RunConfig("compose", str(tmp_path), "x"))
    assert code == EXIT_USAGE
    assert "no .preface files" in err


def test_unparsable_package_exits_two(tmp_path):
    (tmp_path / "broken.preface").write_text('package "p" { const = }\n')
    code, _, err = cli(RunConfig("compose", str(tmp_path), "p"))
    assert code == EXIT_USAGE
    assert err.startswith("parse error:")


def test_missing_model_exits_two(sample_dir, tmp_path):
    code, _, err = cli(config_for(
        sample_dir, "validate", model_path=str(tmp_path / "void.model")))
    assert code == EXIT_USAGE
    assert err.startswith("error:")


def test_unparsable_model_exits_two(sample_dir, tmp_path):
    bad = tmp_path / "bad.model"
    bad.write_text("model\n")
    code, _, err = cli(config_for(sample_dir, "validate", model_path=str(bad)))
    assert code == EXIT_USAGE
    assert err.startswith("parse error:")


def test_unknown_root_exits_three(sample_dir):
    code, _, err = cli(config_for(sample_dir, "compose", root_package="ghost"))
    assert code == EXIT_COMPOSITION
    assert err.startswith("composition error:")


def test_import_cycle_exits_three(tmp_path):
    (tmp_path / "a.preface").write_text('package "a" { import "b" }\n')
    (tmp_path / "b.preface").write_text('package "b" { import "a" }\n')
    code, _, err = cli(RunConfig("compose", str(tmp_path), "a"))
    assert code == EXIT_COMPOSITION
    assert err.startswith("composition error:")
    assert "cycle" in err


def test_unknown_import_exits_three(tmp_path):
    (tmp_path / "a.preface").write_text('package "a" { import "ghost" }\n')
    code, _, err = cli(RunConfig("compose", str(tmp_path), "a"))
    assert code == EXIT_COMPOSITION
    assert "ghost" in err


def test_json_diagnostics_are_valid_json(sample_dir, tmp_path):
    bad = tmp_path / "bad.model"
    bad.write_text(BAD_MODEL)
    code, _, err = cli(config_for(
        sample_dir, "validate", model_path=str(bad), format="json"))
    assert code == EXIT_DIAGNOSTICS
    payload = json.loads(err)
    (entry,) = payload
    assert entry["severity"] == "error"
    assert entry["code"] == "E007"
    assert entry["path"] == "X"
    assert entry["file"] == str(bad)
    assert isinstance(entry["line"], int)
    assert entry["provenance"] is None


# ---------------------------------------------------------------------------
# argparse wiring
# ---------------------------------------------------------------------------


def test_main_runs_compose(sample_dir, capsys):
    preface_dir, root, _ = sample_dir
    code = main(["compose", "--preface", str(preface_dir), "--root", root])
    captured = capsys.readouterr()
    assert code == EXIT_OK
    assert "max = 8" in captured.out


def test_main_requires_a_command(capsys):
    with pytest.raises(SystemExit) as failure:
        main([])
    assert failure.value.code == 2


def test_main_rejects_unknown_format(sample_dir, capsys):
    preface_dir, root, _ = sample_dir
    with pytest.raises(SystemExit) as failure:
        main(["compose", "--preface", str(preface_dir), "--root", root,
              "--format", "xml"])
    assert failure.value.code == 2


def test_main_skeleton_requires_output(sample_dir, capsys):
    preface_dir, root, model_path = sample_dir
    with pytest.raises(SystemExit):
        main(["skeleton", str(model_path),
              "--preface", str(preface_dir), "--root", root])
