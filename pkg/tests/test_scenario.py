"""Scenario file grammar, presets, serialization, and result emission."""

import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wearemf import (
    CSV_FIELDS,
    ExposureResult,
    PatternModel,
    ScenarioError,
    ScenarioFile,
    SweepGrid,
    emit_results,
    load_preset,
    load_scenario,
    preset_names,
    serialize_scenario,
)

MINIMAL = """
link:
  carrier_mhz: 2400.0
  bandwidth_hz: 1000000.0
  tx_power_dbm: 0.0
antenna:
  model: parabolic-envelope
  g_max_dbi: 3.0
"""


def test_preset_names_lists_both():
    assert preset_names() == ["wearable-2.4ghz", "wearable-60ghz"]


def test_60ghz_preset_fields():
    loaded = load_preset("wearable-60ghz")
    sc = loaded.scenario
    assert sc.carrier_mhz == 60000.0
    assert sc.bandwidth_hz == 2.16e9
    assert sc.tx_power_dbm == 10.0
    assert sc.rx_gain_dbi == 10.0
    assert sc.noise_figure_db == 6.0
    assert sc.temperature_k == 290.0
    ant = sc.tx_antenna
    assert ant.model is PatternModel.LINEAR_ARRAY_FACTOR
    assert ant.g_max_dbi == 11.9
    assert ant.n_elements == 16
    assert ant.element_spacing_wavelengths == 0.5
    assert ant.theta_3db_deg == 93.0
    assert ant.sidelobe_floor_db == 30.0
    assert not ant.omni_azimuth
    assert loaded.tissue.reflection_override == 0.7
    assert loaded.quadrature.samples_per_axis == 361
    assert [lim.name for lim in loaded.limits] == ["ICNIRP", "FCC"]


def test_24ghz_preset_fields():
    loaded = load_preset("wearable-2.4ghz")
    sc = loaded.scenario
    assert sc.carrier_mhz == 2400.0
    assert sc.bandwidth_hz == 93e6
    assert sc.tx_power_dbm == 2.0
    assert sc.rx_gain_dbi == 10.0
    assert sc.noise_figure_db == 6.0
    assert sc.temperature_k == 290.0
    ant = sc.tx_antenna
    assert ant.model is PatternModel.PARABOLIC_ENVELOPE
    assert ant.g_max_dbi == 10.1
    assert ant.n_elements == 4
    assert ant.omni_azimuth
    assert loaded.tissue.reflection_override is None
    assert loaded.tissue.penetration_depth_m == 1e-3
    assert loaded.tissue.mass_density_kg_per_m3 == 1000.0


def test_unknown_preset_names_the_alternatives():
    with pytest.raises(ScenarioError, match="wearable-60ghz"):
        load_preset("no-such-thing")


def test_load_from_text_and_from_path(tmp_path):
    from_text = load_scenario(MINIMAL)
    path = tmp_path / "minimal.yaml"
    path.write_text(MINIMAL)
    assert load_scenario(path) == from_text
    assert load_scenario(str(path)) == from_text


def test_defaults_fill_missing_optional_fields():
    loaded = load_scenario(MINIMAL)
    sc = loaded.scenario
    assert sc.rx_gain_dbi == 0.0
    assert sc.noise_figure_db == 0.0
    assert sc.temperature_k == 290.0
    assert sc.label == ""
    ant = sc.tx_antenna
    assert ant.n_elements == 1
    assert ant.element_spacing_wavelengths == 0.5
    assert ant.theta_3db_deg == 93.0
    assert ant.sidelobe_floor_db == 30.0
    assert not ant.omni_azimuth
    assert loaded.tissue.rel_permittivity == complex(1.0, 0.0)
    assert loaded.tissue.reflection_override is None
    assert loaded.quadrature.samples_per_axis == 361
    assert loaded.quadrature.convergence_tol == 1e-3
    assert [lim.name for lim in loaded.limits] == ["ICNIRP", "FCC"]
    assert loaded.sweep_grid is None


@pytest.mark.parametrize("snippet, named_key", [
    (MINIMAL + "bogus: 1\n", "bogus"),
    (MINIMAL.replace("tx_power_dbm: 0.0", "tx_power_dbm: 0.0\n  eirp: 3"),
     "link.eirp"),
    (MINIMAL.replace("g_max_dbi: 3.0", "g_max_dbi: 3.0\n  taper: hann"),
     "antenna.taper"),
    (MINIMAL + "tissue:\n  wetness: high\n", "tissue.wetness"),
    (MINIMAL + "sweep:\n  start_m: 0.01\n  stop_m: 0.1\n  points: 5\n  step: 2\n",
     "sweep.step"),
    (MINIMAL + "limits:\n  - name: X\n    sar_limit_w_per_kg: 1.0\n    body: arm\n",
     "limits[0].body"),
])
def test_unknown_keys_are_named(snippet, named_key):
    with pytest.raises(ScenarioError, match=named_key.replace("[", "\\[")):
        load_scenario(snippet)


def test_missing_required_keys_are_named():
    with pytest.raises(ScenarioError, match="link"):
        load_scenario("antenna:\n  model: parabolic-envelope\n  g_max_dbi: 1.0\n")
    with pytest.raises(ScenarioError, match="link.carrier_mhz"):
        load_scenario(MINIMAL.replace("  carrier_mhz: 2400.0\n", ""))
    with pytest.raises(ScenarioError, match="antenna.model"):
        load_scenario(MINIMAL.replace("  model: parabolic-envelope\n", ""))


def test_wrong_value_types_are_rejected():
    with pytest.raises(ScenarioError, match="link.carrier_mhz"):
        load_scenario(MINIMAL.replace("carrier_mhz: 2400.0", "carrier_mhz: fast"))
    with pytest.raises(ScenarioError, match="must be a number"):
        load_scenario(MINIMAL.replace("carrier_mhz: 2400.0", "carrier_mhz: true"))
    with pytest.raises(ScenarioError, match="omni_azimuth"):
        load_scenario(MINIMAL + "  omni_azimuth: 3\n")


def test_unsigned_exponent_gets_a_usable_hint():
    # YAML 1.1 parses 2.16e9 as a string; the error must say how to fix it
    bad = MINIMAL.replace("carrier_mhz: 2400.0", "carrier_mhz: 2.4e3")
    with pytest.raises(ScenarioError, match=r"exponent with a sign"):
        load_scenario(bad)
    good = MINIMAL.replace("carrier_mhz: 2400.0", "carrier_mhz: 2.4e+3")
    assert load_scenario(good).scenario.carrier_mhz == 2400.0


def test_bad_model_lists_the_options():
    bad = MINIMAL.replace("parabolic-envelope", "dish")
    with pytest.raises(ScenarioError, match="linear-array-factor"):
        load_scenario(bad)


def test_invariant_violations_carry_the_section_name():
    with pytest.raises(ScenarioError, match="link"):
        load_scenario(MINIMAL.replace("carrier_mhz: 2400.0", "carrier_mhz: -1.0"))
    with pytest.raises(ScenarioError, match="tissue"):
        load_scenario(MINIMAL + "tissue:\n  mass_density_kg_per_m3: 0.0\n")


def test_parse_errors_carry_a_line_number():
    with pytest.raises(ScenarioError, match="line"):
        load_scenario("link: [unclosed\nantenna: {\n")


def test_negative_permittivity_loss_is_rejected():
    with pytest.raises(ScenarioError, match="rel_permittivity_imag"):
        load_scenario(MINIMAL + "tissue:\n  rel_permittivity_imag: -1.0\n")


def test_round_trip_identity_for_presets():
    for name in preset_names():
        loaded = load_preset(name)
        text = serialize_scenario(loaded)
        again = load_scenario(text)
        assert again == loaded
        assert serialize_scenario(again) == text


def test_round_trip_preserves_explicit_distances():
    source = MINIMAL + "sweep:\n  distances_m: [0.001, 0.002, 0.03]\n"
    loaded = load_scenario(source)
    assert loaded.sweep_grid.resolve() == (0.001, 0.002, 0.03)
    assert load_scenario(serialize_scenario(loaded)) == loaded


def test_sweep_grid_forms_are_exclusive():
    with pytest.raises(ValueError):
        SweepGrid(start_m=0.001, stop_m=0.01, points=5, distances_m=(0.001,))
    with pytest.raises(ValueError):
        SweepGrid(start_m=0.001, stop_m=0.01)  # points missing
    with pytest.raises(ValueError):
        SweepGrid(distances_m=())
    with pytest.raises(ValueError):
        SweepGrid(distances_m=(0.002, 0.001))
    with pytest.raises(ValueError):
        SweepGrid(start_m=0.01, stop_m=0.001, points=5)


def test_sweep_grid_resolution_endpoints():
    grid = SweepGrid(start_m=0.001, stop_m=0.05, points=50)
    distances = grid.resolve()
    assert len(distances) == 50
    assert distances[0] == 0.001
    assert distances[-1] == 0.05
    assert all(b > a for a, b in zip(distances, distances[1:]))


def _rows():
    return [
        ExposureResult(distance_m=0.012, path_loss_db=29.6, snr_db=76.9,
                       rate_bps=5.5e10, boresight_pd_w_per_m2=85.6,
                       boresight_sar_w_per_kg=87.3, avg_sar_w_per_kg=3.55),
        ExposureResult(distance_m=0.024, path_loss_db=35.6, snr_db=70.9,
                       rate_bps=5.1e10, boresight_pd_w_per_m2=21.4,
                       boresight_sar_w_per_kg=21.8, avg_sar_w_per_kg=0.89),
    ]


def test_csv_header_and_shape():
    data = emit_results([], "csv")
    assert data == (",".join(CSV_FIELDS) + "\n").encode()
    data = emit_results(_rows(), "csv")
    lines = data.decode().strip().split("\n")
    assert len(lines) == 3
    assert lines[0] == ",".join(CSV_FIELDS)
    assert all(len(line.split(",")) == 7 for line in lines[1:])


def test_csv_values_round_trip_to_nine_digits():
    rows = _rows()
    lines = emit_results(rows, "csv").decode().strip().split("\n")[1:]
    for row, line in zip(rows, lines):
        parsed = [float(cell) for cell in line.split(",")]
        source = [row.distance_m, row.path_loss_db, row.snr_db, row.rate_bps,
                  row.boresight_pd_w_per_m2, row.boresight_sar_w_per_kg,
                  row.avg_sar_w_per_kg]
        for read, original in zip(parsed, source):
            assert read == pytest.approx(original, rel=1e-8)


def test_json_mirrors_csv_fields():
    payload = json.loads(emit_results(_rows(), "json"))
    assert isinstance(payload, list) and len(payload) == 2
    assert list(payload[0].keys()) == list(CSV_FIELDS)
    assert payload[0]["distance_m"] == pytest.approx(0.012)


def test_emission_is_deterministic():
    rows = _rows()
    assert emit_results(rows, "csv") == emit_results(rows, "csv")
    assert emit_results(rows, "json") == emit_results(rows, "json")


def test_emit_rejects_unknown_format():
    with pytest.raises(ValueError):
        emit_results(_rows(), "xml")


positive = st.floats(min_value=1e-6, max_value=1e9, allow_nan=False,
                     allow_infinity=False)
anyreal = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False,
                    allow_infinity=False)


@given(distance=positive, loss=anyreal, snr=anyreal, rate=positive,
       pd=positive, sar=positive, avg=positive)
@settings(max_examples=100, deadline=None)
def test_csv_precision_holds_for_arbitrary_rows(distance, loss, snr, rate,
                                                pd, sar, avg):
    row = ExposureResult(distance_m=distance, path_loss_db=loss, snr_db=snr,
                         rate_bps=rate, boresight_pd_w_per_m2=pd,
                         boresight_sar_w_per_kg=sar, avg_sar_w_per_kg=avg)
    line = emit_results([row], "csv").decode().strip().split("\n")[1]
    values = [float(cell) for cell in line.split(",")]
    originals = [distance, loss, snr, rate, pd, sar, avg]
    for read, original in zip(values, originals):
        assert read == pytest.approx(original, rel=1e-8, abs=1e-8)
