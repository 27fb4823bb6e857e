import json

from click.testing import CliRunner

from camtool.cli import main


def test_synth_train_export_pipeline(tmp_path):
    runner = CliRunner()
    data = tmp_path / "data"
    run = tmp_path / "run"

    r = runner.invoke(main, ["synth", "--out", str(data), "--classes", "3",
                             "--per-class", "10", "--seed", "3"])
    assert r.exit_code == 0, r.output
    manifest = data / "manifest.csv"
    assert manifest.exists()

    r = runner.invoke(main, [
        "train", "--manifest", str(manifest), "--mode", "R", "--split", "0",
        "--out", str(run), "--backbone", "tiny", "--epochs", "20",
        "--lr", "0.05", "--seed", "3", "--no-pretrained",
    ])
    assert r.exit_code == 0, r.output
    summary = json.loads(r.output.strip().splitlines()[-1])
    assert (run / summary["scores_file"]).exists()

    pairs = tmp_path / "pairs.json"
    meta = json.loads((run / "run_split0.json").read_text())
    pairs.write_text(json.dumps({meta["test_images"][0]["path"]: "pair-000"}))
    r = runner.invoke(main, ["export", "--run", str(run), "--split", "0",
                             "--pairs", str(pairs)])
    assert r.exit_code == 0, r.output

    export = json.loads((run / "export_split0.json").read_text())
    by_ref = {e["image_ref"]: e for e in export["images"]}
    assert by_ref[meta["test_images"][0]["path"]]["pair_id"] == "pair-000"
