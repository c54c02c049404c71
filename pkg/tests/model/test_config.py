import pytest

from dehazer.exceptions import ConfigurationError
from dehazer.model import (
    PRESETS,
    TABLE_PRESETS,
    Attention,
    Bottleneck,
    Core,
    NetworkConfig,
    load_network_config,
    parse_network_config,
    preset_config,
    preset_name,
)
from dehazer.tensor import ActivationName


def test_twelve_presets():
    assert len(PRESETS) == 12
    assert set(TABLE_PRESETS) <= set(PRESETS)
    assert TABLE_PRESETS == (
        "S-U-Net",
        "G-U-Net",
        "G-U-Net 4-C",
        "SPP G-U-Net 4-C (ReLU)",
        "SPP G-U-Net 4-C (Swish)",
        "EDN-GTM",
    )


@pytest.mark.parametrize("name", list(PRESETS))
def test_preset_names_are_recognized(name: str):
    assert preset_config(name).preset_name == name


@pytest.mark.parametrize("name", TABLE_PRESETS)
def test_table_presets_round_trip_through_config_text(name: str):
    cfg = parse_network_config(f"# ablation row\npreset = {name}\n")

    assert cfg == preset_config(name)
    assert preset_name(cfg) == name


def test_edn_gtm_architecture():
    cfg = preset_config("EDN-GTM")

    assert cfg.core is Core.GENERATIVE
    assert cfg.input_channels == 4
    assert cfg.bottleneck is Bottleneck.SPP
    assert cfg.attention is Attention.NONE
    assert cfg.activation.name is ActivationName.SWISH
    assert cfg.convs_per_stage == 3
    assert cfg.spp_kernels == (5, 9, 13)


def test_segmentation_preset_is_rgb_only():
    cfg = preset_config("S-U-Net")

    assert cfg.core is Core.SEGMENTATION
    assert not cfg.is_generative
    assert cfg.input_channels == 3


def test_parse_overrides():
    cfg = parse_network_config(
        """
        preset = EDN-GTM   # start from the full model
        base_width = 8
        depth = 2

        activation = leaky_relu(0.2)
        spp_kernels = 3, 5
        """
    )

    assert cfg.base_width == 8
    assert cfg.depth == 2
    assert cfg.activation.name is ActivationName.LEAKY_RELU
    assert cfg.activation.slope == 0.2
    assert cfg.spp_kernels == (3, 5)
    assert cfg.preset_name is None


def test_parse_without_preset():
    cfg = parse_network_config("core = segmentation\ninput_channels = 3\nbottleneck = plain\n")

    assert cfg.core is Core.SEGMENTATION
    assert cfg.bottleneck is Bottleneck.PLAIN


@pytest.mark.parametrize(
    "text",
    [
        "colour = blue",
        "depth = 2\ndepth = 3",
        "just words",
        "= 4",
        "preset = U-Net++",
        "input_channels = 5",
        "depth = 1",
        "stage_kernel = 4",
        "spp_kernels = 4, 6",
        "activation = tanh",
        "base_width = 0",
    ],
)
def test_parse_rejects(text: str):
    with pytest.raises(ConfigurationError):
        parse_network_config(text)


def test_validate_extent():
    cfg = NetworkConfig(depth=3)

    cfg.validate_extent(64, 48)
    with pytest.raises(ConfigurationError):
        cfg.validate_extent(60, 64)


def test_scale_defaults(global_configuration, monkeypatch):
    assert (NetworkConfig().base_width, NetworkConfig().depth) == (16, 3)

    monkeypatch.setattr(global_configuration, "SCALE", "full")

    assert (NetworkConfig().base_width, NetworkConfig().depth) == (64, 4)


def test_config_is_immutable():
    cfg = NetworkConfig()

    with pytest.raises(TypeError):
        cfg.depth = 5


def test_load_network_config(tmp_path):
    path = tmp_path / "model.cfg"
    path.write_text("preset = G-U-Net 4-C\nbase_width = 4\n", encoding="utf-8")

    assert load_network_config("EDN-GTM") == preset_config("EDN-GTM")
    assert load_network_config(path).base_width == 4
    with pytest.raises(ConfigurationError):
        load_network_config(tmp_path / "missing.cfg")


def test_json_round_trip():
    cfg = preset_config("SPP G-U-Net 4-C (LeakyReLU)", base_width=8)

    assert NetworkConfig.parse_raw(cfg.json()) == cfg
