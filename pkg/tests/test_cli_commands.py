"""Tests for the CLI command handlers and exit codes."""

import json
from argparse import Namespace

import pytest

from codrisk import cli
from codrisk.cli import (
    EXIT_CHECK_FAILED,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_USAGE,
    cmd_check_dep,
    cmd_check_order,
    cmd_cod,
    cmd_delta,
    cmd_dmeasure,
    cmd_figure,
    cmd_psi,
    cmd_threshold,
    dispatch,
    main,
    render_csv,
)
from codrisk.const import COD_TOL
from codrisk.exceptions import CodDivergenceError
from codrisk.models import FigureTable


def _args(**kwargs) -> Namespace:
    """Namespace with the common options at their unset values."""
    common = {
        "out": None,
        "format": "json",
        "tol": None,
        "grid": None,
        "seed": None,
        "workers": None,
        "verbose": False,
    }
    return Namespace(**{**common, **kwargs})


def test_cmd_dmeasure_json(capsys, reference_values):
    """Test D_g[X] output as JSON."""
    # Arrange: Expected shortfall of a standard normal.
    args = _args(g="es:0.95", x="normal:0,1")

    # Act: Run the handler.
    code = cmd_dmeasure(args)

    # Assert: Reference value and diagnostics in the document.
    document = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert document["value"] == pytest.approx(
        reference_values["standard_normal"]["es_0.95"], abs=1e-8
    )
    assert "err_estimate" in document


def test_cmd_threshold_csv(capsys):
    """Test the threshold quantile as CSV."""
    # Arrange: VaR conditioning with CSV output.
    args = _args(g="var:0.9", x="normal:0,1", format="csv")

    # Act: Run the handler.
    code = cmd_threshold(args)

    # Assert: Header and one round-trip row.
    lines = capsys.readouterr().out.splitlines()
    assert code == EXIT_OK
    assert lines[0] == "g,x,u_g"
    assert lines[1].endswith(",0.9")


def test_cmd_cod_with_given_level(capsys):
    """Test CoD with the level given directly."""
    # Arrange: Independent risks, identity distortion.
    args = _args(model="indep,normal:0,1,normal:2,1", g=None, u=0.9, h="id")

    # Act: Run the handler.
    code = cmd_cod(args)

    # Assert: Unconditional mean of Y.
    document = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert document["measure"] == "cod"
    assert document["value"] == pytest.approx(2.0, abs=1e-6)


def test_cmd_delta_csv_flattens_components(capsys):
    """Test that CSV output carries the components as columns."""
    # Arrange: Positively dependent risks.
    args = _args(
        model="gumbel:2,normal:0,1,normal:0,1",
        g="var:0.9",
        u=None,
        h="es:0.9",
        format="csv",
    )

    # Act: Run the handler.
    code = cmd_delta(args)

    # Assert: Component columns present, positive contribution.
    header, row = capsys.readouterr().out.splitlines()
    assert code == EXIT_OK
    columns = dict(zip(header.split(","), row.split(","), strict=False))
    assert "cod" in columns and "base" in columns
    assert float(columns["value"]) > 0


def test_cmd_check_order_exit_codes(capsys):
    """Test the exit code follows the verdict."""
    # Act: A holding and a failing usual-order check.
    holds = cmd_check_order(_args(x="normal:0,1", y="normal:1,1", order="st"))
    capsys.readouterr()
    fails = cmd_check_order(_args(x="normal:0,1", y="normal:0,1.5", order="st"))

    # Assert: 0 then 2 with a violation location.
    document = json.loads(capsys.readouterr().out)
    assert holds == EXIT_OK
    assert fails == EXIT_CHECK_FAILED
    assert document["first_violation"]["location"]


def test_cmd_check_dep_uses_env_grid(monkeypatch, capsys):
    """Test the grid size falls back to the environment."""
    # Arrange: Grid size from the environment only.
    monkeypatch.setenv("CODRISK_GRID", "15")
    monkeypatch.delenv("CODRISK_TOL", raising=False)

    # Act: Check PQD of a Gumbel copula.
    code = cmd_check_dep(_args(copula="gumbel:2", notion="PQD"))

    # Assert: Environment grid used.
    document = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert document["grid_size"] == 15


def test_flag_overrides_env(monkeypatch, capsys):
    """Test that an explicit flag wins over the environment."""
    # Arrange: Conflicting environment value.
    monkeypatch.setenv("CODRISK_GRID", "15")

    # Act: Explicit grid.
    cmd_psi(_args(copula="gumbel:2", u=0.9, h="dualpower:1.1", grid=21))

    # Assert: Flag value reported.
    assert json.loads(capsys.readouterr().out)["grid_size"] == 21


def test_invalid_env_value(monkeypatch):
    """Test a malformed environment value is a usage error."""
    # Arrange: Non-numeric grid.
    monkeypatch.setenv("CODRISK_GRID", "many")
    args = _args(command="check-dep", copula="gumbel:2", notion="PQD")

    # Act and Assert: Exit code 4.
    assert dispatch(args) == EXIT_USAGE


def test_cmd_figure_writes_gnuplot(tmp_path, capsys):
    """Test the figure command with overrides and a gnuplot script."""
    # Arrange: Output paths.
    out = tmp_path / "fig3a.csv"
    script = tmp_path / "fig3a.gp"
    args = _args(
        figure_id="3a",
        set=["points=4", "gamma=1.1"],
        gnuplot=str(script),
        out=str(out),
        format="csv",
    )

    # Act: Run the handler.
    code = cmd_figure(args)

    # Assert: CSV file with the header and a script pointing at it.
    assert code == EXIT_OK
    assert out.read_text().splitlines()[0] == "series,x,value"
    assert str(out) in script.read_text()
    assert capsys.readouterr().out == ""


def _recording_run_figure(monkeypatch) -> list:
    """Replace run_figure by a stub that records the experiment specs."""
    specs = []

    def run(spec):
        specs.append(spec)
        return FigureTable(
            figure_id=spec.figure_id,
            title="stub",
            x_label="x",
            rows=[],
            checks=[],
            parameters=spec.overrides,
        )

    monkeypatch.setattr(cli, "run_figure", run)
    return specs


@pytest.mark.parametrize(("figure_id", "key"), [("3a", "psi_grid"), ("5a", "order_grid")])
def test_cmd_figure_passes_tolerance_and_grid(monkeypatch, capsys, figure_id, key):
    """Test --tol reaches the evaluation and --grid fills the panel's grid."""
    # Arrange: Record the spec instead of computing the panel.
    specs = _recording_run_figure(monkeypatch)
    args = _args(figure_id=figure_id, set=["points=4"], gnuplot=None, tol=1e-6, grid=51)

    # Act: Run the handler.
    code = cmd_figure(args)

    # Assert: Coerced overrides, grid and tolerance.
    spec = specs[0]
    assert code == EXIT_OK
    assert spec.tol == 1e-6
    assert spec.overrides == {"points": 4, key: 51}
    assert isinstance(spec.overrides["points"], int)
    assert json.loads(capsys.readouterr().out)["figure"] == figure_id


def test_cmd_figure_set_wins_over_grid(monkeypatch):
    """Test an explicit grid override beats the environment grid."""
    # Arrange: Grid from the environment and from --set.
    specs = _recording_run_figure(monkeypatch)
    monkeypatch.setenv("CODRISK_GRID", "15")
    monkeypatch.delenv("CODRISK_TOL", raising=False)
    args = _args(figure_id="3a", set=["psi_grid=31", "thetas=[2, 3]"], gnuplot=None)

    # Act: Run the handler.
    cmd_figure(args)

    # Assert: The --set value and float lists.
    assert specs[0].overrides == {"psi_grid": 31, "thetas": [2.0, 3.0]}
    assert specs[0].tol == COD_TOL


def test_cmd_figure_rejects_unknown_overrides():
    """Test unknown panel parameters are usage errors."""
    # Arrange: Parameter of another panel.
    args = _args(command="figure", figure_id="3a", set=["alpha=0.5"], gnuplot=None)

    # Act and Assert: Usage exit code before any computation.
    assert dispatch(args) == EXIT_USAGE


def test_help_documents_parametrizations(capsys):
    """Test the model and marginal help spells out the parameters."""
    # Act: Help of two subcommands.
    for command in ("cod", "check-order"):
        with pytest.raises(SystemExit) as excinfo:
            main([command, "--help"])
        assert excinfo.value.code == 0

        # Assert: Rate parametrization of the gamma law.
        assert "gamma:shape,rate" in capsys.readouterr().out


def test_dispatch_maps_domain_errors():
    """Test invalid parameters give exit code 4."""
    # Arrange: Negative standard deviation.
    args = _args(command="dmeasure", g="es:0.9", x="normal:0,-1")

    # Act and Assert: Usage exit code.
    assert dispatch(args) == EXIT_USAGE


def test_dispatch_maps_numerical_errors(monkeypatch):
    """Test numerical failures give exit code 3."""

    # Arrange: Handler that fails to converge.
    def failing(args):
        raise CodDivergenceError("Quadrature did not converge", {"evaluations": 10})

    monkeypatch.setitem(cli.HANDLERS, "threshold", failing)

    # Act and Assert: Numerical exit code.
    assert dispatch(_args(command="threshold")) == EXIT_NUMERICAL


def test_main_parse_errors_exit_with_usage_code():
    """Test argparse errors exit with code 4."""
    # Act and Assert: Unknown figure and missing conditioning option.
    with pytest.raises(SystemExit) as excinfo:
        main(["figure", "9z"])
    assert excinfo.value.code == EXIT_USAGE

    with pytest.raises(SystemExit) as excinfo:
        main(["cod", "--model", "indep,normal:0,1,normal:0,1", "--h", "id"])
    assert excinfo.value.code == EXIT_USAGE


def test_main_without_command(capsys):
    """Test that no command prints help and returns 4."""
    assert main([]) == EXIT_USAGE
    assert "usage" in capsys.readouterr().out


def test_main_end_to_end(capsys):
    """Test a full parse and dispatch."""
    # Act: Concordance of two Gumbel copulas.
    code = main(["concordance", "--c1", "gumbel:1.5", "--c2", "gumbel:3", "--grid", "30"])

    # Assert: Holds.
    assert code == EXIT_OK
    assert json.loads(capsys.readouterr().out)["holds"] is True


def test_render_csv_cells():
    """Test CSV cell formatting."""
    # Act: Mixed record.
    text = render_csv([{"a": 0.1, "b": True, "c": None, "d": [1.0, 2.0]}])

    # Assert: Round-trip floats, lowercase literals, JSON lists.
    assert text == 'a,b,c,d\n0.1,true,none,"[1.0, 2.0]"\n'
    assert render_csv([]) == ""
