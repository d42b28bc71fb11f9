import json

import pytest

from tinydense import ActivationKind, Matrix, network
from tinydense.cli import main
from tinydense.evaluation import bundled_dataset


@pytest.fixture
def fixture_csv(tmp_path):
    ds = bundled_dataset()
    lines = []
    for i in range(ds.size):
        species = "virginica" if ds.labels[i] == 1 else "versicolor"
        lines.append(",".join(f"{v:.1f}" for v in ds.features.row(i)) + "," + species)
    path = tmp_path / "iris.csv"
    path.write_text("\n".join(lines) + "\n")
    return str(path)


class TestDescribe:
    def test_builtin_summary(self, capsys):
        assert main(["describe", "iris-8"]) == 0
        out = capsys.readouterr().out
        assert "Widths: 4 -> 2 -> 3 -> 2 -> 1" in out

    def test_iris6_summary(self, capsys):
        assert main(["describe", "iris-6"]) == 0
        assert "Widths: 4 -> 3 -> 2 -> 1" in capsys.readouterr().out

    def test_missing_file_exits_2(self, capsys):
        assert main(["describe", "missing.model"]) == 2
        assert "missing.model" in capsys.readouterr().err

    def test_invalid_document_exits_2(self, tmp_path, capsys):
        path = tmp_path / "bad.model"
        path.write_text('{"name": "x"}')
        assert main(["describe", str(path)]) == 2

    def test_model_file_accepted(self, tmp_path, capsys):
        path = tmp_path / "ok.model"
        path.write_text(network.save(network.builtin("iris-6")))
        assert main(["describe", str(path)]) == 0

    def test_json_output(self, capsys):
        assert main(["describe", "iris-8", "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["widths"] == [4, 2, 3, 2, 1]
        assert doc["parameters"] == 30


class TestPredict:
    def test_one_line_per_sample(self, fixture_csv, capsys):
        assert main(["predict", "iris-6", fixture_csv]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 100
        prob, label = lines[0].split()
        assert 0.0 < float(prob) < 1.0
        assert label in ("0", "1")

    def test_deterministic(self, fixture_csv, capsys):
        main(["predict", "iris-6", fixture_csv, "--scaling", "standard"])
        first = capsys.readouterr().out
        main(["predict", "iris-6", fixture_csv, "--scaling", "standard"])
        assert capsys.readouterr().out == first

    def test_threshold_flag_validated(self, fixture_csv, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["predict", "iris-6", fixture_csv, "--threshold", "1.1"])
        assert exc.value.code == 2

    def test_dimension_mismatch_exits_3(self, tmp_path, capsys):
        path = tmp_path / "narrow.csv"
        path.write_text("1.0,2.0,3.5\n4.0,5.0,6.5\n")
        assert main(["predict", "iris-8", str(path)]) == 3
        assert "features" in capsys.readouterr().err

    def test_unlabeled_csv_accepted(self, tmp_path, capsys):
        path = tmp_path / "plain.csv"
        path.write_text("5.0,3.0,4.0,1.5\n6.0,3.0,5.0,2.5\n")
        assert main(["predict", "iris-6", str(path)]) == 0
        assert len(capsys.readouterr().out.splitlines()) == 2

    def test_json_output(self, fixture_csv, capsys):
        assert main(["predict", "iris-6", fixture_csv, "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert len(doc["probabilities"]) == 100
        assert set(doc["labels"]) <= {0, 1}

    def test_mode_flag_changes_output(self, fixture_csv, capsys):
        main(["predict", "iris-8", fixture_csv, "--scaling", "standard"])
        compat = capsys.readouterr().out
        main(["predict", "iris-8", fixture_csv, "--scaling", "standard",
              "--mode", "corrected"])
        corrected = capsys.readouterr().out
        assert compat != corrected


class TestEvaluate:
    def test_scoreboard_layout_and_accuracy(self, fixture_csv, capsys):
        assert main(["evaluate", "iris-6", fixture_csv, "--scaling", "standard"]) == 0
        out = capsys.readouterr().out
        assert "Predicted Positive" in out and "Predicted Negative" in out
        assert "Actual Positive" in out and "Actual Negative" in out
        assert "Accuracy: 98.0%" in out

    def test_perfect_predictions_format(self, tmp_path, capsys):
        # a passthrough model that thresholds its single feature
        spec = network.NetworkSpec(
            "step", 1,
            (network.LayerSpec(1, Matrix.from_rows([[10.0]]), (0.0,),
                               ActivationKind("sigmoid")),),
        )
        model = tmp_path / "step.model"
        model.write_text(network.save(spec))
        data = tmp_path / "step.csv"
        data.write_text("2.0,1\n-2.0,0\n3.0,1\n")
        assert main(["evaluate", str(model), str(data)]) == 0
        assert "Accuracy: 100.0%" in capsys.readouterr().out

    def test_comparison_pair(self, fixture_csv, capsys):
        assert main(["evaluate", "iris-6", fixture_csv]) == 0
        six = capsys.readouterr().out
        assert main(["evaluate", "iris-8", fixture_csv]) == 0
        eight = capsys.readouterr().out
        assert "Model: iris-6" in six and "Model: iris-8" in eight

    def test_json_report(self, fixture_csv, capsys):
        assert main(["evaluate", "iris-6", fixture_csv, "--scaling", "standard",
                     "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["confusion_matrix"] == {"tp": 50, "fn": 0, "fp": 2, "tn": 48}
        assert doc["accuracy"] == 0.98

    def test_unlabeled_data_exits_2(self, tmp_path, capsys):
        path = tmp_path / "nolabel.csv"
        path.write_text("5.0,3.0,4.0,1.5\n")
        assert main(["evaluate", "iris-6", str(path)]) == 2


class TestEmit:
    def test_writes_file_and_reports_bytes(self, tmp_path, capsys):
        out = tmp_path / "net.py"
        assert main(["emit", "iris-6", "--out", str(out)]) == 0
        data = out.read_bytes()
        assert f"wrote {len(data)} bytes" in capsys.readouterr().out

    def test_rerun_is_byte_identical(self, tmp_path, capsys):
        out = tmp_path / "net.py"
        main(["emit", "iris-8", "--out", str(out)])
        first = out.read_bytes()
        main(["emit", "iris-8", "--out", str(out)])
        assert out.read_bytes() == first

    def test_compat_variant_differs(self, tmp_path, capsys):
        a, b = tmp_path / "a.py", tmp_path / "b.py"
        main(["emit", "iris-8", "--out", str(a)])
        main(["emit", "iris-8", "--out", str(b), "--compat"])
        assert a.read_bytes() != b.read_bytes()
        assert 'yp = tanh(' in b.read_text()

    def test_include_eval_embeds_dataset(self, tmp_path, capsys):
        out = tmp_path / "net.py"
        assert main(["emit", "iris-6", "--out", str(out), "--include-eval"]) == 0
        text = out.read_text()
        assert "ytest = [" in text and "Xtest = [" in text

    def test_unwritable_path_exits_4(self, tmp_path, capsys):
        assert main(["emit", "iris-6", "--out",
                     str(tmp_path / "no" / "such" / "dir" / "net.py")]) == 4

    def test_invalid_model_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.model"
        bad.write_text("{not json")
        assert main(["emit", str(bad), "--out", str(tmp_path / "x.py")]) == 2


class TestSelftest:
    def test_fresh_build_passes(self, capsys):
        assert main(["selftest"]) == 0
        out = capsys.readouterr().out
        assert out.count("ok") == 3

    def test_repeated_runs_identical(self, capsys):
        main(["selftest"])
        first = capsys.readouterr().out
        main(["selftest"])
        assert capsys.readouterr().out == first

    def test_corrupted_builtin_constant_fails(self, monkeypatch, capsys):
        import dataclasses

        real_builtin = network.builtin

        def corrupted(name):
            spec = real_builtin(name)
            if name != "iris-6":
                return spec
            layer = spec.layers[1]
            rows = layer.weights.to_rows()
            rows[1][0] += 0.25  # a mid-table weight, not a spot-checked corner
            bad = dataclasses.replace(layer, weights=Matrix.from_rows(rows))
            return dataclasses.replace(spec, layers=(spec.layers[0], bad, spec.layers[2]))

        monkeypatch.setattr(network, "builtin", corrupted)
        assert main(["selftest"]) == 1
        captured = capsys.readouterr()
        assert "built-in model fidelity" in captured.out
        assert "built-in model fidelity" in captured.err
