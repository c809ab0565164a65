import importlib

import pytest

from bicrates import config


def test_example_env_file(tmp_path):
    """The template lists the variables the package reads."""
    path = config.create_example_env_file(tmp_path / '.env')
    text = path.read_text()
    for name in ('BICRATES_LOG_LEVEL', 'BICRATES_TOL', 'BICRATES_GRID', 'BICRATES_SEED', 'BICRATES_PRECISION'):
        assert f"{name}=" in text


def test_example_env_file_no_overwrite(tmp_path):
    """An existing file is left alone."""
    target = tmp_path / '.env'
    target.write_text('KEEP=1\n')
    with pytest.raises(FileExistsError):
        config.create_example_env_file(target)
    assert target.read_text() == 'KEEP=1\n'


def test_environment_overrides(mock_env_vars, monkeypatch):
    """Numeric defaults follow the environment."""
    reloaded = importlib.reload(config)
    assert reloaded.DEFAULT_GRID == int(mock_env_vars['BICRATES_GRID'])
    assert reloaded.DEFAULT_TOL == 1e-9
    assert reloaded.GAP_LIMIT == 0.5
    for name in mock_env_vars:
        monkeypatch.delenv(name)
    assert importlib.reload(config).DEFAULT_GRID == 201
