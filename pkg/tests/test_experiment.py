"""Experiment configs: bundled files, validation, case construction."""

import json

import numpy as np
import pytest

from liereach.experiment import build_case, bundled_config_path, load_config
from liereach.systems import so3_attitude_case, torus_consensus_case


class TestLoadConfig:
    def test_bundled_names_resolve(self):
        for name in ("torus", "so3"):
            cfg = load_config(name)
            assert cfg["system"] == name

    def test_bundled_path_exists(self):
        path = bundled_config_path("torus")
        assert path.exists()

    def test_loads_explicit_path(self, tmp_path):
        src = json.loads(bundled_config_path("so3").read_text())
        path = tmp_path / "mine.json"
        path.write_text(json.dumps(src))
        assert load_config(path) == src

    def test_accepts_dicts(self):
        cfg = load_config("torus")
        assert load_config(cfg) == cfg

    def test_unknown_name_raises(self):
        with pytest.raises((FileNotFoundError, ValueError)):
            load_config("pendulum")


class TestBuildCase:
    def test_bundled_torus_matches_library_case(self):
        built = build_case(load_config("torus"))
        lib = torus_consensus_case()
        assert built.config == lib.config
        np.testing.assert_array_equal(built.init.box.lower, lib.init.box.lower)
        np.testing.assert_array_equal(built.init.box.upper, lib.init.box.upper)
        for a, b in zip(built.init.center.blocks, lib.init.center.blocks):
            np.testing.assert_allclose(a, b, atol=1e-15)

    def test_bundled_so3_matches_library_case(self):
        built = build_case(load_config("so3"))
        lib = so3_attitude_case()
        assert built.config == lib.config
        np.testing.assert_array_equal(built.init.box.lower, lib.init.box.lower)
        t = 1.234
        np.testing.assert_array_equal(
            built.system.control_nominal(t), lib.system.control_nominal(t)
        )
        np.testing.assert_array_equal(
            built.system.control_halfwidth(), lib.system.control_halfwidth()
        )

    def test_recenter_and_tableau_options(self):
        cfg = dict(load_config("torus"))
        cfg["recenter"] = "width:0.5"
        cfg["tableau"] = "euler"
        case = build_case(cfg)
        assert case.config.tableau.stages == 1
        assert case.config.recenter.kind == "width"

    def test_constant_control_vector(self):
        cfg = dict(load_config("so3"))
        cfg["control"] = [0.0, 0.0, 1.0]
        case = build_case(cfg)
        np.testing.assert_array_equal(case.system.control_nominal(2.2), [0.0, 0.0, 1.0])

    def test_unknown_key_rejected(self):
        cfg = dict(load_config("torus"))
        cfg["stepsize"] = 0.01
        with pytest.raises(ValueError, match="stepsize"):
            build_case(cfg)

    def test_missing_key_rejected(self):
        cfg = dict(load_config("torus"))
        del cfg["h"]
        with pytest.raises(ValueError, match="h"):
            build_case(cfg)

    def test_bad_shapes_rejected(self):
        cfg = dict(load_config("torus"))
        cfg["init_lower"] = [-0.6]
        with pytest.raises(ValueError):
            build_case(cfg)

    def test_crossed_bounds_rejected(self):
        cfg = dict(load_config("torus"))
        cfg["init_lower"], cfg["init_upper"] = cfg["init_upper"], cfg["init_lower"]
        with pytest.raises(ValueError):
            build_case(cfg)

    def test_horizon_must_be_step_multiple(self):
        cfg = dict(load_config("torus"))
        cfg["t_final"] = 3.0049
        with pytest.raises(ValueError):
            build_case(cfg)

    def test_bad_tableau_rejected(self):
        cfg = dict(load_config("torus"))
        cfg["tableau"] = "rk38"
        with pytest.raises(ValueError):
            build_case(cfg)

    def test_bad_mode_rejected(self):
        cfg = dict(load_config("torus"))
        cfg["mode"] = "hybrid"
        with pytest.raises(ValueError):
            build_case(cfg)
