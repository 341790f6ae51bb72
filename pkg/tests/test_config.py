# SPDX-License-Identifier: Apache-2.0

# Standard
from unittest import mock
import os

# Third Party
from pydantic import ValidationError
import pytest

# First Party
from z2seq.pcoms.config import DEFAULT_MAX_NODES, RunConfig, SearchConfig, resolve_shards
from z2seq.pcoms.exceptions import InvalidShardCountError


def test_search_config_defaults():
    config = SearchConfig()
    assert config.max_nodes == DEFAULT_MAX_NODES
    assert config.shards == 1
    assert config.n_limit == 10
    assert config.q_limit == 12
    assert config.allow_repeats


@mock.patch.dict(os.environ, {"PCOMS_MAX_NODES": "500"})
def test_max_nodes_from_env():
    assert SearchConfig.from_env().max_nodes == 500
    assert SearchConfig.from_env(shards=2).shards == 2


@mock.patch.dict(os.environ, {}, clear=True)
def test_max_nodes_without_env():
    assert SearchConfig.from_env().max_nodes == DEFAULT_MAX_NODES


def test_search_config_rejects_bad_values():
    with pytest.raises(ValidationError):
        SearchConfig(max_nodes=0)
    with pytest.raises(ValidationError):
        SearchConfig(shards="many")


def test_run_config_format():
    assert RunConfig(subcommand="bounds").format == "json"
    with pytest.raises(ValidationError):
        RunConfig(subcommand="bounds", format="xml")
    with pytest.raises(ValidationError):
        RunConfig(subcommand="bounds", n=0)


@mock.patch("z2seq.pcoms.config.psutil.cpu_count", return_value=8)
def test_resolve_shards_auto(cpu_mock):
    assert resolve_shards("auto") == 4
    cpu_mock.assert_called()


@mock.patch("z2seq.pcoms.config.psutil.cpu_count", return_value=1)
def test_resolve_shards_auto_single_core(cpu_mock):
    assert resolve_shards("auto") == 1


def test_resolve_shards_explicit():
    assert resolve_shards(3) == 3
    assert resolve_shards(None) == 1


@pytest.mark.parametrize("shards", [0, -2, "two", True])
def test_resolve_shards_invalid(shards):
    with pytest.raises(InvalidShardCountError):
        resolve_shards(shards)
