from ganqec.weights_io import read_weights, validate_generator

from ganqec_trainer.cli import main


def test_train_cli_end_to_end(small_dataset, tmp_path, capsys):
    weights = tmp_path / "w.gqwt"
    golden = tmp_path / "g.gqwt"
    log = tmp_path / "log.csv"
    rc = main([
        "--dataset", str(small_dataset),
        "--out-weights", str(weights),
        "--out-golden", str(golden),
        "--out-log", str(log),
        "--iterations", "4",
        "--fid-every", "2",
        "--golden-count", "1",
        "--seed", "3",
    ])
    assert rc == 0
    out = capsys.readouterr().out
    assert "wrote generator weights" in out
    assert "FID:" in out
    validate_generator(read_weights(weights))
    assert read_weights(golden).metadata["cases"] == 1
    header, first = log.read_text().splitlines()[:2]
    assert header == "iteration,loss_g,loss_d,fid"
    assert first.startswith("1,")
