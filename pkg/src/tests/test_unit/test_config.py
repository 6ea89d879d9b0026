import math

import pytest
from pydantic import ValidationError

from config import (
    ConfigValueError,
    UnknownConfigKeyError,
    apply_overrides,
    get_settings,
    load_sim_config,
    with_updates,
)
import config.settings as app_settings
from schemas.simulation import (
    ChannelScheme,
    PowerScheme,
    SchemeId,
    SweepAxis,
    SweepSpec,
    parse_schemes,
)


def test_testing_settings_are_selected():
    settings = get_settings()
    assert isinstance(settings, app_settings.TestingSettings)
    assert settings.WORKERS == 1
    assert settings.SHOW_PROGRESS is False


def test_defaults_load_with_linear_views(default_config):
    assert default_config.pathloss_exp == 3.6
    assert default_config.p_c_max_mw == pytest.approx(1000.0)
    assert default_config.noise_mw == pytest.approx(10 ** -11.4)
    assert default_config.gamma_c_th == pytest.approx(10 ** 0.6)
    assert default_config.lambda_cu * default_config.cell_area_m2 == pytest.approx(10.0, rel=1e-6)


def test_channel_loop_defaults_start_dense_and_recolor(default_config):
    assert default_config.gamma_th_init == 1e-6
    assert default_config.delta == pytest.approx(0.05 * default_config.gamma_th_init)
    assert default_config.refine_colorings == 10


def test_overrides_are_typed_and_revalidated(default_config):
    config = apply_overrides(default_config, ["p_g_max_dbm=10", "color_choice=greedy", " max_outer_iters = 5 "])
    assert config.p_g_max_dbm == 10.0
    assert config.color_choice == "greedy"
    assert config.max_outer_iters == 5
    assert default_config.p_g_max_dbm == 25.0, "Overrides must not touch the original"


def test_unknown_override_key(default_config):
    with pytest.raises(UnknownConfigKeyError) as exc_info:
        apply_overrides(default_config, ["nope=1"])
    assert exc_info.value.key == "nope"


@pytest.mark.parametrize("item", ["delta=", "delta=one", "delta"])
def test_malformed_override(default_config, item):
    with pytest.raises(ConfigValueError):
        apply_overrides(default_config, [item])


@pytest.mark.parametrize(
    "updates",
    [
        {"pathloss_exp": 2.0},
        {"lambda_gt": -1e-6},
        {"delta": 0.0},
        {"noise_dbm": math.inf},
        {"color_choice": "fastest"},
        {"max_power_iters": 30},
        {"refine_colorings": -1},
    ],
)
def test_invariants_are_enforced(default_config, updates):
    with pytest.raises(ValidationError):
        with_updates(default_config, **updates)


def test_power_loop_cap_follows_window_and_step(default_config):
    config = with_updates(default_config, beta_dbm_step=2.0, max_power_iters=16)
    assert config.max_power_iters == 16
    with pytest.raises(ValidationError, match="max_power_iters"):
        with_updates(default_config, power_dynamic_range_db=80.0)


def test_config_file_must_exist(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_sim_config(tmp_path / "missing.json")


def test_extra_keys_in_documents_are_rejected(tmp_path):
    path = tmp_path / "config.json"
    path.write_text('{"lambda_cu": 1e-5, "lambda_gt": 1e-5, "lambda_gr": 1e-4, "mystery": 1}')
    with pytest.raises(ValidationError):
        load_sim_config(path)


def test_scheme_parsing():
    scheme = SchemeId.parse(" rca+wfpa ")
    assert scheme.channel_scheme is ChannelScheme.RCA
    assert scheme.power_scheme is PowerScheme.WFPA
    assert scheme.label == "RCA+WFPA"

    with pytest.raises(ValueError):
        SchemeId.parse("RCA")
    with pytest.raises(ValueError):
        SchemeId.parse("RCA+SOMETHING")


def test_presets_expand_without_duplicates():
    schemes = parse_schemes("channel-comparison,power-comparison,PROPOSED+EPA")
    labels = [s.label for s in schemes]
    assert labels == [
        "PROPOSED+PROPOSED", "RCA+PROPOSED", "GREEDY_IA+PROPOSED",
        "PROPOSED+EPA", "PROPOSED+MPA", "PROPOSED+WFPA",
    ]


@pytest.mark.parametrize(
    "values, schemes",
    [([], "RCA+EPA"), ([2.0, 1.0], "RCA+EPA"), ([1.0, 1.0], "RCA+EPA"), ([1.0], "")],
)
def test_sweep_spec_validation(values, schemes):
    with pytest.raises(ValidationError):
        SweepSpec(axis=SweepAxis.P_G_MAX_DBM, values=values, schemes=parse_schemes(schemes))


def test_sweep_spec_defaults():
    spec = SweepSpec(axis="lambda_gt", values=[1e-5], schemes=parse_schemes("PROPOSED+PROPOSED"))
    assert spec.instances_per_point == 500
    assert spec.base_seed == 0
