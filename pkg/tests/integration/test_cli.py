import json
import os

import pytest

from src.cli.config import SCHEMA_VERSION, build_config
from src.cli.main import EXIT_FAILED, EXIT_OK, EXIT_USAGE, WorkbenchCLI, main, render
from src.divided_power import AlgebraShape
from src.scalars import ext_field_make
from src.zassenhaus import PEnvelopeElement


def run_json(capsys, argv):
    code = main(argv + ["--format", "json"])
    return code, json.loads(capsys.readouterr().out)


@pytest.fixture
def o12_text():
    shape = AlgebraShape.one_variable(ext_field_make(5), 2)
    return {
        "d": PEnvelopeElement.partial_power(shape, 0).serialize(),
        "x_d": PEnvelopeElement.monomial(shape, 1).serialize(),
    }


class TestConstruct:
    """Integration tests for the construct command"""

    def test_witt_text(self, capsys, clean_workbench_env):
        """Test the text report of W(1;1)"""
        assert main(["construct", "--family", "witt", "--p", "5"]) == EXIT_OK
        out = capsys.readouterr().out

        assert out.startswith("construct: ok")
        assert "dimension: 5" in out

    def test_envelope_json(self, capsys, clean_workbench_env):
        """Test the JSON report of W(1;2)_p"""
        code, document = run_json(capsys, ["construct", "--family", "zassenhaus-envelope", "--n", "2"])

        assert code == EXIT_OK
        assert document["schema_version"] == SCHEMA_VERSION
        assert document["command"] == "construct"
        assert document["config"]["family"] == "zassenhaus-envelope"
        assert document["dimension"] == 26

    def test_e_algebra(self, capsys, clean_workbench_env):
        """Test the e-basis presentation over F_25"""
        code, document = run_json(capsys, ["construct", "--family", "zassenhaus-envelope", "--n", "2", "--M", "2"])

        assert code == EXIT_OK
        assert document["e_algebra_dimension"] == 25
        assert document["e_algebra_envelope_dimension"] == 26


class TestCount:
    """Integration tests for the count command"""

    def test_enumerate(self, capsys, clean_workbench_env):
        """Test brute force over W(1;1) at p = 3"""
        code, document = run_json(capsys, ["count", "--family", "witt", "--p", "3"])

        assert code == EXIT_OK
        assert document["scanned"] == 27
        assert document["agreement"]
        assert "elapsed" not in document

    def test_timings(self, capsys, clean_workbench_env):
        """Test that --timings adds elapsed"""
        code, document = run_json(capsys, ["count", "--family", "witt", "--p", "3", "--timings"])
        assert "elapsed" in document

    def test_reruns_are_identical(self, capsys, clean_workbench_env):
        """Test byte-identical output of two sampled runs"""
        argv = ["count", "--family", "witt", "--p", "3", "--mode", "sample", "--samples", "20", "--seed", "5"]
        main(argv)
        first = capsys.readouterr().out
        main(argv)
        assert capsys.readouterr().out == first

    def test_guard(self, capsys, clean_workbench_env):
        """Test that enumerating W(2;1) is a usage error"""
        assert main(["count", "--family", "witt", "--m", "2"]) == EXIT_USAGE
        assert "enumeration guard" in capsys.readouterr().err


class TestReduce:
    """Integration tests for the reduce command"""

    def test_semidirect_default(self, capsys, clean_workbench_env):
        """Test the default reduction of the sl2-semidirect family"""
        code, document = run_json(capsys, ["reduce", "--family", "sl2-semidirect", "--seed", "3"])

        assert code == EXIT_OK
        assert document["which"] == "semidirect"
        assert document["replay"]

    def test_element_file(self, capsys, temp_dir, o12_text, clean_workbench_env):
        """Test reading the input element from a file"""
        path = os.path.join(temp_dir, "element.txt")
        with open(path, "w") as handle:
            handle.write(o12_text["d"] + "\n")

        code, document = run_json(capsys, ["reduce", "--family", "zassenhaus-envelope", "--element-file", path])
        assert code == EXIT_OK
        assert document["moves"] == 0

    def test_missing_file(self, capsys, temp_dir, clean_workbench_env):
        """Test that an unreadable element file is a usage error"""
        path = os.path.join(temp_dir, "missing.txt")
        assert main(["reduce", "--family", "zassenhaus-envelope", "--element-file", path]) == EXIT_USAGE

    def test_library_refusal(self, capsys, o12_text, clean_workbench_env):
        """Test that x d has no Yao-Shu form"""
        code = main(["reduce", "--family", "zassenhaus-envelope", "--which", "yao-shu", "--element", o12_text["x_d"]])

        assert code == EXIT_FAILED
        assert "error: PreconditionError" in capsys.readouterr().err

    def test_wrong_family(self, capsys, clean_workbench_env):
        """Test a reduction on the wrong family"""
        assert main(["reduce", "--family", "witt", "--which", "tyurin"]) == EXIT_USAGE


class TestSampleAndVerify:
    """Integration tests for the sample and verify commands"""

    def test_sample(self, capsys, clean_workbench_env):
        """Test regular nilpotent samples of W(1;2)_p"""
        code, document = run_json(capsys, ["sample", "--family", "zassenhaus-envelope", "--constraint",
                                           "regular-nilpotent", "--samples", "2", "--seed", "1"])

        assert code == EXIT_OK
        assert len(document["elements"]) == 2
        assert all(a >= 1 for a in document["attempts"])

    def test_verify_scalars(self, capsys, clean_workbench_env):
        """Test the scalars ledger in JSON"""
        code, document = run_json(capsys, ["verify", "--suite", "scalars"])

        assert code == EXIT_OK
        assert document["checks"] == 3
        assert document["failed"] == 0
        assert all(row["passed"] for row in document["ledger"])
        assert all("elapsed" not in row for row in document["ledger"])

    def test_verify_text(self, capsys, clean_workbench_env):
        """Test the text ledger"""
        assert main(["verify", "--suite", "scalars"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "lucas_sweep" in out
        assert "PASS" in out


class TestUsage:
    """Integration tests for argument and configuration errors"""

    def test_invalid_configuration(self, capsys, clean_workbench_env):
        """Test that p = 3 is refused for the zassenhaus family"""
        assert main(["construct", "--family", "zassenhaus-envelope", "--p", "3"]) == EXIT_USAGE
        assert "p > 3" in capsys.readouterr().err

    @pytest.mark.parametrize("command", ["count", "sample"])
    def test_extension_field_refused(self, capsys, clean_workbench_env, command):
        """Test that count and sample over F_25 exit with a usage error"""
        argv = [command, "--family", "zassenhaus-envelope", "--n", "2", "--M", "2", "--samples", "2"]
        assert main(argv) == EXIT_USAGE
        assert "only used by construct and verify" in capsys.readouterr().err

    def test_unknown_command(self, capsys):
        """Test that argparse exits with status 2"""
        with pytest.raises(SystemExit) as excinfo:
            main(["plot"])
        assert excinfo.value.code == 2

    def test_env_seed(self, capsys, clean_workbench_env):
        """Test that WORKBENCH_SEED reaches the config block"""
        clean_workbench_env.setenv("WORKBENCH_SEED", "17")
        code, document = run_json(capsys, ["construct"])
        assert document["config"]["seed"] == 17


class TestWorkbenchCLI:
    """Integration tests for the command runner"""

    def test_run_records_results(self, witt_config):
        """Test that results and timings are kept per command"""
        cli = WorkbenchCLI(witt_config)
        result = cli.run("construct")

        assert cli.results["construct"] is result
        assert "construct" in cli.timing
        with pytest.raises(ValueError):
            cli.run("plot")

    def test_invalid_config(self):
        """Test that the runner validates its configuration"""
        with pytest.raises(ValueError):
            WorkbenchCLI(build_config(family="zassenhaus-envelope", p=3))

    def test_render_text(self, witt_config):
        """Test nested values in the text rendering"""
        text = render("reduce", {"status": "ok", "chain": ["swap 1,2"], "details": {"s": 1}}, witt_config, "text")
        assert text.splitlines() == ["reduce: ok", "chain:", "  swap 1,2", "details:", "  s: 1"]
