import json

import numpy as np
import pytest

from qpg.bundle import BundleError, load_bundle, save_bundle
from qpg.cli import main
from qpg.reps import sphere_generators
from qpg.suites import ConfigError, SuiteConfig, run_suite


def _strip_timing(text):
    data = json.loads(text)
    data.pop("timing")
    return data


class TestConfig:
    def test_defaults(self):
        cfg = SuiteConfig()
        assert (cfg.n, cfg.q, cfg.c, cfg.dim(), cfg.K, cfg.B, cfg.tol) == (2, 2.0, 1.0, 12, 3, 2, 1e-9)

    @pytest.mark.parametrize("kw", [{"suite": "nope"}, {"q": 1.0}, {"n": 0}, {"B": 0}, {"tol": 0},
                                    {"D": 4, "margin": 4}, {"format": "xml"}])
    def test_invalid(self, kw):
        with pytest.raises(ConfigError):
            SuiteConfig(**kw)


class TestSuites:
    def test_relations_n1(self):
        rep = run_suite(SuiteConfig(suite="relations", n=1, D=8))
        assert rep.passed
        assert all(c.anchor for c in rep.checks)

    def test_quotient_reports_zero(self):
        rep = run_suite(SuiteConfig(suite="quotient", n=2, c=1.0))
        first = next(c for c in rep.checks if c.id == "x1*x1=c.c1")
        assert first.passed and first.measured == 0.0

    def test_series_dims(self):
        rep = run_suite(SuiteConfig(suite="series", n=2))
        assert rep.checks[0].measured["dims"] == [1, 9, 81]

    def test_text_format(self):
        rep = run_suite(SuiteConfig(suite="series", n=1))
        lines = rep.to_text().splitlines()
        assert lines[0].startswith("suite series") and len(lines) == 2

    def test_report_schema(self):
        data = run_suite(SuiteConfig(suite="podles")).to_dict()
        assert data["schema_version"] == 1 and data["status"] == "pass"
        assert set(data["checks"][0]) == {"id", "anchor", "status", "measured", "tolerance"}


class TestCli:
    def test_pass_exit(self, capsys):
        assert main(["series", "--n", "1"]) == 0
        assert json.loads(capsys.readouterr().out)["status"] == "pass"

    def test_fail_exit(self, capsys):
        # B = 1 cannot hold the (0, 2) translation at K = 3
        assert main(["series", "--n", "1", "--xbound", "1"]) == 1

    def test_config_exit(self, capsys):
        assert main(["relations", "--q", "0.5"]) == 2
        assert main(["quotient", "--n", "1"]) == 2

    def test_argparse_exit(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["bogus"])
        assert err.value.code == 2

    def test_cap_exit(self, monkeypatch, capsys):
        monkeypatch.setenv("QPG_MAX_ENUM", "5")
        assert main(["series", "--n", "2"]) == 3
        assert "QPG_MAX_ENUM" in capsys.readouterr().err

    def test_overflow_exit(self, monkeypatch, capsys):
        import qpg.cli
        from qpg.groupoid import BoundOverflowError

        def boom(config):
            raise BoundOverflowError("translation 3 exceeds B = 2")
        monkeypatch.setattr(qpg.cli, "run_suite", boom)
        assert main(["series"]) == 3
        assert "--xbound" in capsys.readouterr().err

    def test_deterministic_report(self, tmp_path, capsys):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        main(["exactseq", "--n", "2", "--report", str(a)])
        main(["exactseq", "--n", "2", "--report", str(b)])
        assert _strip_timing(a.read_text()) == _strip_timing(b.read_text())
        da, db = json.loads(a.read_text()), json.loads(b.read_text())
        da.pop("timing"), db.pop("timing")
        assert json.dumps(da) == json.dumps(db)

    def test_text_report(self, tmp_path, capsys):
        out = tmp_path / "r.txt"
        assert main(["podles", "--format", "text", "--report", str(out)]) == 0
        assert out.read_text().startswith("suite podles: PASS")

    def test_bundle_written(self, tmp_path, capsys):
        assert main(["relations", "--n", "1", "--dim", "6", "--bundle", str(tmp_path)]) == 0
        ops = load_bundle(tmp_path / "sphere")
        assert list(ops) == ["u21", "u22"]


class TestBundle:
    def test_roundtrip(self, tmp_path):
        gens = {f"u3{m}": op for m, op in enumerate(sphere_generators(2, 2.0, 5), 1)}
        save_bundle(tmp_path / "s", gens)
        back = load_bundle(tmp_path / "s")
        assert list(back) == list(gens)
        for k in gens:
            assert back[k] == gens[k]

    def test_missing_file(self, tmp_path):
        gens = {f"u3{m}": op for m, op in enumerate(sphere_generators(2, 2.0, 4), 1)}
        save_bundle(tmp_path / "s", gens)
        (tmp_path / "s" / "u32.json").unlink()
        with pytest.raises(BundleError, match="u32"):
            load_bundle(tmp_path / "s")

    def test_corrupt_file(self, tmp_path):
        save_bundle(tmp_path / "s", {"a": sphere_generators(1, 2.0, 4)[0]})
        (tmp_path / "s" / "a.json").write_text("{")
        with pytest.raises(BundleError, match="'a'"):
            load_bundle(tmp_path / "s")

    def test_no_manifest(self, tmp_path):
        with pytest.raises(BundleError):
            load_bundle(tmp_path)

    def test_pattern_shared_across_q(self, tmp_path):
        save_bundle(tmp_path / "q2", {f"u{m}": op for m, op in enumerate(sphere_generators(2, 2.0, 5))})
        save_bundle(tmp_path / "q3", {f"u{m}": op for m, op in enumerate(sphere_generators(2, 3.0, 5))})
        a, b = load_bundle(tmp_path / "q2"), load_bundle(tmp_path / "q3")
        differ = False
        for k in a:
            assert a[k].exponents == b[k].exponents
            for e in a[k].exponents:
                ma, mb = a[k].matrix(e), b[k].matrix(e)
                assert np.array_equal((ma != 0).toarray(), (mb != 0).toarray())
                differ |= not np.allclose(ma.toarray(), mb.toarray())
        assert differ
