import json

import pytest

from fixtures import FIG2
from nameloom.cli import main
from nameloom.index import save_index


@pytest.fixture(scope="module")
def index_dir(corpus_index, tmp_path_factory):
    out = tmp_path_factory.mktemp("cli") / "idx"
    save_index(corpus_index, out)
    return out


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestBuildIndex:
    def test_four_fn_fixture_stats(self, four_fn_dir, tmp_path, capsys):
        out = tmp_path / "idx"
        code, stdout, _ = run(capsys, "build-index", str(four_fn_dir),
                              "-o", str(out))
        assert code == 0
        assert "functions:            4" in stdout
        meta = json.loads((out / "meta.json").read_text())
        assert meta["functions"] == 4

    def test_missing_directory_exit_2(self, tmp_path, capsys):
        code, _, stderr = run(capsys, "build-index", str(tmp_path / "nope"),
                              "-o", str(tmp_path / "idx"))
        assert code == 2
        assert "not found" in stderr

    def test_empty_directory_exit_3(self, tmp_path, capsys):
        empty = tmp_path / "empty"
        empty.mkdir()
        code, _, stderr = run(capsys, "build-index", str(empty),
                              "-o", str(tmp_path / "idx"))
        assert code == 3
        assert "empty corpus" in stderr


class TestRecover:
    def test_json_report_maps_r_to_data_transfer(self, index_dir, tmp_path,
                                                 capsys):
        src = tmp_path / "fig2.js"
        src.write_text(FIG2)
        code, stdout, _ = run(capsys, "recover", str(src),
                              "--index", str(index_dir), "--emit", "json")
        assert code == 0
        report = json.loads(stdout)
        byvar = {v["minified"]: v["applied"]
                 for v in report["functions"][0]["variables"]}
        assert byvar["r"] == "dataTransfer"
        assert byvar["n"] == "data"

    def test_emit_json_writes_no_js(self, index_dir, tmp_path, capsys):
        src = tmp_path / "fig2.js"
        src.write_text(FIG2)
        out = tmp_path / "report.json"
        code, _, _ = run(capsys, "recover", str(src), "--index",
                         str(index_dir), "--emit", "json", "-o", str(out))
        assert code == 0
        assert out.is_file()
        assert not (tmp_path / "report.json.js").exists()
        assert list(tmp_path.glob("*.js")) == [src]

    def test_emit_both_writes_pair(self, index_dir, tmp_path, capsys):
        src = tmp_path / "fig2.js"
        src.write_text(FIG2)
        out = tmp_path / "out.js"
        code, _, _ = run(capsys, "recover", str(src), "--index",
                         str(index_dir), "-o", str(out))
        assert code == 0
        assert "dataTransfer" in out.read_text()
        assert (tmp_path / "out.js.report.json").is_file()

    def test_bad_flag_value_exit_64(self, index_dir, tmp_path, capsys):
        src = tmp_path / "fig2.js"
        src.write_text(FIG2)
        code, _, _ = run(capsys, "recover", str(src), "--index",
                         str(index_dir), "--phi", "nope")
        assert code == 64

    def test_out_of_range_config_exit_64(self, index_dir, tmp_path, capsys):
        src = tmp_path / "fig2.js"
        src.write_text(FIG2)
        code, _, stderr = run(capsys, "recover", str(src), "--index",
                              str(index_dir), "--phi", "1.5")
        assert code == 64

    def test_env_var_supplies_index(self, index_dir, tmp_path, capsys,
                                    monkeypatch):
        monkeypatch.setenv("NAME_LOOM_INDEX", str(index_dir))
        src = tmp_path / "fig2.js"
        src.write_text(FIG2)
        code, stdout, _ = run(capsys, "recover", str(src), "--emit", "json")
        assert code == 0
        assert "dataTransfer" in stdout

    def test_unparseable_input_exit_1(self, index_dir, tmp_path, capsys):
        src = tmp_path / "broken.js"
        src.write_text("function ( {")
        code, _, stderr = run(capsys, "recover", str(src), "--index",
                              str(index_dir))
        assert code == 1

    def test_missing_input_exit_2(self, index_dir, tmp_path, capsys):
        code, _, _ = run(capsys, "recover", str(tmp_path / "nope.js"),
                         "--index", str(index_dir))
        assert code == 2

    def test_corrupt_index_exit_1(self, corpus_index, tmp_path, capsys):
        bad = tmp_path / "badidx"
        save_index(corpus_index, bad)
        blob = bytearray((bad / "index.bin").read_bytes())
        blob[0] ^= 0xFF
        (bad / "index.bin").write_bytes(bytes(blob))
        src = tmp_path / "fig2.js"
        src.write_text(FIG2)
        code, _, stderr = run(capsys, "recover", str(src), "--index", str(bad))
        assert code == 1
        assert "BadMagic" in stderr

    def test_byte_identical_invocations(self, index_dir, tmp_path, capsys):
        src = tmp_path / "fig2.js"
        src.write_text(FIG2)
        _, out_a, _ = run(capsys, "recover", str(src), "--index",
                          str(index_dir), "--emit", "js")
        _, out_b, _ = run(capsys, "recover", str(src), "--index",
                          str(index_dir), "--emit", "js")
        assert out_a == out_b


class TestMinify:
    def test_fig_pair_shape(self, tmp_path, capsys):
        from fixtures import FIG1
        src = tmp_path / "fig1.js"
        src.write_text(FIG1)
        truth_path = tmp_path / "truth.json"
        out = tmp_path / "min.js"
        code, _, _ = run(capsys, "minify", str(src), "--seed", "3",
                         "-o", str(out), "--truth", str(truth_path))
        assert code == 0
        from nameloom.jsparse import ast_equal, parse
        assert ast_equal(parse(out.read_text()), parse(FIG1),
                         ignore_identifier_names=True)
        truth = json.loads(truth_path.read_text())
        assert truth["functions"][0]["name"] == "getClipboardContent"

    def test_no_locals_identity(self, tmp_path, capsys):
        src = tmp_path / "plain.js"
        src.write_text("top.level = window.thing;\n")
        code, stdout, _ = run(capsys, "minify", str(src))
        assert code == 0
        assert stdout == "top.level = window.thing;\n"

    def test_unparseable_exit_1(self, tmp_path, capsys):
        src = tmp_path / "broken.js"
        src.write_text("var = ;")
        code, _, _ = run(capsys, "minify", str(src))
        assert code == 1


class TestEvaluate:
    def test_self_recovery_prints_accuracy(self, corpus_dir, index_dir,
                                           capsys):
        code, stdout, _ = run(capsys, "evaluate", str(corpus_dir),
                              "--index", str(index_dir))
        assert code == 0
        accuracy = float([line for line in stdout.splitlines()
                          if line.startswith("accuracy:")][0].split()[1])
        assert accuracy >= 0.9

    def test_ablate_prints_six_rows(self, corpus_dir, index_dir, capsys):
        code, stdout, _ = run(capsys, "evaluate", str(corpus_dir),
                              "--index", str(index_dir), "--ablate")
        assert code == 0
        for label in ("tsc", "svc", "tsc+svc", "tsc+mvc", "svc+mvc",
                      "tsc+svc+mvc"):
            assert any(line.startswith(label + " ")
                       for line in stdout.splitlines()), label

    def test_sweep_emits_csv_and_figure(self, corpus_dir, index_dir,
                                        tmp_path, capsys):
        out = tmp_path / "results"
        code, stdout, _ = run(capsys, "evaluate", str(corpus_dir),
                              "--index", str(index_dir),
                              "--sweep", "phi", "0.5:1.0:0.1",
                              "-o", str(out))
        assert code == 0
        lines = stdout.strip().splitlines()
        assert lines[0] == "parameter,value,accuracy,per_var_ms"
        assert len(lines) == 7
        assert (out / "sweep_phi.csv").is_file()
        assert (out / "sweep_phi.png").stat().st_size > 0

    def test_ablation_outputs_figure(self, corpus_dir, index_dir, tmp_path,
                                     capsys):
        out = tmp_path / "results"
        code, _, _ = run(capsys, "evaluate", str(corpus_dir),
                         "--index", str(index_dir), "--ablate",
                         "-o", str(out))
        assert code == 0
        assert (out / "report.json").is_file()
        assert (out / "ablation.csv").is_file()
        assert (out / "ablation.png").stat().st_size > 0

    def test_folds_mode(self, corpus_dir, capsys):
        code, stdout, _ = run(capsys, "evaluate", str(corpus_dir),
                              "--folds", "2")
        assert code == 0
        assert "mean accuracy:" in stdout

    def test_missing_corpus_exit_2(self, tmp_path, capsys):
        code, _, _ = run(capsys, "evaluate", str(tmp_path / "nope"))
        assert code == 2

    def test_bad_sweep_grid_exit_64(self, corpus_dir, index_dir, capsys):
        code, _, _ = run(capsys, "evaluate", str(corpus_dir),
                         "--index", str(index_dir),
                         "--sweep", "phi", "0.5:1.0")
        assert code == 64


class TestUsage:
    def test_unknown_flag_exit_64(self, capsys):
        assert main(["recover", "x.js", "--bogus"]) == 64

    def test_help_lists_defaults(self, capsys):
        assert main(["recover", "--help"]) == 0
        stdout = capsys.readouterr().out
        assert "default: 0.8" in stdout       # phi
        assert "default: 30" in stdout        # beam
        assert "default: 0.75" in stdout      # alpha
