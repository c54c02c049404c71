import json

import pytest

from dehazer.data import AUGMENTATION_SETTINGS
from dehazer.exceptions import ConfigurationError
from dehazer.model import TABLE_PRESETS, preset_config
from dehazer.training import (
    AblationRow,
    AblationTable,
    preset_for_plan,
    run_ablation,
    run_augmentation_ablation,
    write_report,
)


@pytest.fixture
def quick_plan(tiny_plan):
    return tiny_plan.replace(iterations=1, batch=1)


def test_architecture_ablation_covers_the_table(quick_plan, tiny_dataset):
    table = run_ablation(TABLE_PRESETS, quick_plan, tiny_dataset)

    assert table.kind == "architecture"
    assert table.names == list(TABLE_PRESETS)
    assert table.iterations == 1
    hazy = {row.hazy_psnr for row in table.rows}
    assert len(hazy) == 1


def test_ablation_rows_use_the_plan_extent(tiny_config):
    cfg = preset_for_plan("G-U-Net", tiny_config)

    assert cfg.base_width == 4
    assert cfg.depth == 2
    assert cfg.input_channels == 3
    assert cfg.preset_name == "G-U-Net"


def test_augmentation_ablation(quick_plan, tiny_dataset):
    table = run_augmentation_ablation("EDN-GTM", quick_plan, tiny_dataset, settings=("none", "hflip", "mosaic"))

    assert table.kind == "augmentation (EDN-GTM)"
    assert table.names == ["none", "hflip", "mosaic"]


def test_augmentation_ablation_defaults_to_every_setting(quick_plan, tiny_dataset):
    table = run_augmentation_ablation("S-U-Net", quick_plan, tiny_dataset)

    assert table.names == list(AUGMENTATION_SETTINGS)


def test_ablation_rejects_unknown_presets(quick_plan, tiny_dataset):
    with pytest.raises(ConfigurationError):
        run_ablation(["EDN-GTM", "ResNet"], quick_plan, tiny_dataset)


def test_ablation_needs_validation_pairs(quick_plan, tiny_dataset):
    with pytest.raises(ConfigurationError):
        run_ablation(["EDN-GTM"], quick_plan, tiny_dataset.train, val=[])


def test_ablation_report_is_reproducible(tmp_path, quick_plan, tiny_dataset):
    presets = ["S-U-Net", "EDN-GTM"]

    first = write_report(run_ablation(presets, quick_plan, tiny_dataset), tmp_path / "a.json")
    second = write_report(run_ablation(presets, quick_plan, tiny_dataset), tmp_path / "b.json")

    assert first.read_bytes() == second.read_bytes()
    assert [row["name"] for row in json.loads(first.read_text())["rows"]] == presets


def test_format_table():
    table = AblationTable(
        kind="architecture",
        seed=0,
        iterations=10,
        dataset_tag="val",
        rows=[
            AblationRow(name="S-U-Net", psnr=15.5, ssim=0.61, hazy_psnr=12.0, hazy_ssim=0.5),
            AblationRow(name="EDN-GTM", psnr=18.25, ssim=0.7, hazy_psnr=12.0, hazy_ssim=0.5),
        ],
    )

    lines = table.format_table().splitlines()

    assert lines[0].split() == ["configuration", "PSNR", "SSIM"]
    assert lines[1].split() == ["S-U-Net", "15.50", "0.6100"]
    assert lines[2].split() == ["EDN-GTM", "18.25", "0.7000"]
    assert table.row("EDN-GTM").psnr == 18.25
    with pytest.raises(KeyError):
        table.row("G-U-Net")


def test_write_report_keeps_field_order(tmp_path):
    cfg = preset_config("EDN-GTM", base_width=4, depth=2)
    row = AblationRow(name=cfg.preset_name, psnr=20.0, ssim=0.7, hazy_psnr=15.0, hazy_ssim=0.6)

    path = write_report(row, tmp_path / "nested" / "row.json")

    assert list(json.loads(path.read_text())) == ["name", "psnr", "ssim", "hazy_psnr", "hazy_ssim"]
    assert path.read_text().endswith("}\n")
