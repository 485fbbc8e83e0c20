import pytest

from src.cli.config import (
    ENUMERATION_GUARD,
    FAMILIES,
    RunConfig,
    SessionConfig,
    build_config,
    get_config,
    update_config,
)


class TestBuildConfig:
    """Unit tests for CLI-style configuration"""

    def test_witt_heights(self, clean_workbench_env):
        """Test that a single height is repeated over m variables"""
        config = build_config(p=5, family="witt", m=2, n=(1,))

        assert config.algebra.heights == (1, 1)
        assert config.algebra.m == 2
        assert build_config(family="witt", n=(1, 2)).algebra.m == 2
        assert build_config(family="witt", n=3).algebra.heights == (3,)

    def test_zassenhaus_height(self, clean_workbench_env):
        """Test that n is the height of W(1;n)"""
        assert build_config(family="zassenhaus-envelope").algebra.n == 2
        config = build_config(family="zassenhaus-envelope", n=3)
        assert config.algebra.n == 3
        assert config.algebra.m == 1

    def test_defaults(self, clean_workbench_env):
        """Test the default session"""
        config = build_config()

        assert config.p == 5
        assert config.M == 1
        assert config.family == "witt"
        assert config.run.seed == 0
        assert config.run.workers == 1
        assert config.problems() == []
        assert get_config().family in FAMILIES
        assert ENUMERATION_GUARD == 10**7

    def test_to_dict(self, clean_workbench_env):
        """Test the config block of JSON reports"""
        record = build_config(family="witt", m=2, seed=3).to_dict()
        assert record["n"] == [1, 1]
        assert record["seed"] == 3
        assert build_config(family="zassenhaus-envelope", n=2).to_dict()["n"] == 2


class TestValidation:
    """Unit tests for configuration constraints"""

    @pytest.mark.parametrize("kwargs, fragment", [
        ({"family": "zassenhaus-envelope", "p": 3}, "p > 3"),
        ({"family": "zassenhaus-envelope", "n": 1}, "n >= 2"),
        ({"family": "zassenhaus-envelope", "n": 2, "t": 2}, "t must lie"),
        ({"family": "witt", "M": 2}, "M must be 1"),
        ({"family": "sl2-semidirect", "p": 2}, "p > 2"),
        ({"family": "lie"}, "unknown family"),
        ({"workers": 0}, "worker count"),
        ({"output_format": "yaml"}, "unknown format"),
    ])
    def test_problems(self, clean_workbench_env, kwargs, fragment):
        """Test that each violated constraint is reported"""
        config = build_config(**kwargs)
        assert any(fragment in issue for issue in config.problems())
        with pytest.raises(ValueError):
            config.validate()

    def test_all_problems_listed(self, clean_workbench_env):
        """Test that validate reports every problem at once"""
        config = build_config(family="zassenhaus-envelope", p=3, n=1)
        with pytest.raises(ValueError, match="p > 3.*n >= 2"):
            config.validate()

    def test_valid_tyurin_order(self, clean_workbench_env):
        """Test t inside 1..n-1"""
        assert build_config(family="zassenhaus-envelope", n=3, t=2).validate().algebra.t == 2

    def test_e_algebra_degree(self, clean_workbench_env):
        """Test that M is used only when n divides it"""
        assert build_config(family="zassenhaus-envelope", n=2, M=4).e_algebra_degree() == 4
        assert build_config(family="zassenhaus-envelope", n=2, M=3).e_algebra_degree() == 2
        assert build_config(family="zassenhaus-envelope", n=2).e_algebra_degree() == 2

    @pytest.mark.parametrize("command", ["count", "reduce", "sample"])
    def test_prime_field_commands_refuse_extension(self, clean_workbench_env, command):
        """Test that count, reduce and sample refuse M > 1 instead of ignoring it"""
        config = build_config(family="zassenhaus-envelope", n=2, M=2)

        assert config.problems() == []
        assert "only used by construct and verify" in config.command_problems(command)[0]
        with pytest.raises(ValueError, match=f"{command} works over F_5"):
            config.validate(command)
        assert config.validate("construct") is config
        assert config.validate("verify") is config


class TestEnvironment:
    """Unit tests for environment overrides"""

    def test_seed_and_workers(self, clean_workbench_env):
        """Test WORKBENCH_SEED and WORKBENCH_WORKERS"""
        clean_workbench_env.setenv("WORKBENCH_SEED", "42")
        clean_workbench_env.setenv("WORKBENCH_WORKERS", "3")
        run = RunConfig()

        assert run.seed == 42
        assert run.workers == 3

    def test_explicit_values_win(self, clean_workbench_env):
        """Test that explicit arguments override the environment"""
        clean_workbench_env.setenv("WORKBENCH_SEED", "42")
        assert build_config(seed=5).run.seed == 5

    def test_non_integer_ignored(self, clean_workbench_env):
        """Test that a malformed override falls back to the default"""
        clean_workbench_env.setenv("WORKBENCH_WORKERS", "many")
        assert RunConfig().workers == 1


class TestUpdateConfig:
    """Unit tests for in-place updates"""

    def test_update_sections(self, clean_workbench_env):
        """Test that keys are routed to field, algebra and run"""
        config = update_config(SessionConfig(), p=7, family="sl2-semidirect", samples=10, unknown=1)

        assert config.p == 7
        assert config.family == "sl2-semidirect"
        assert config.run.samples == 10
        assert not hasattr(config.run, "unknown")
