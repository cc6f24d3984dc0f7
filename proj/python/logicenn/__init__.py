# Copyright 2026 The LogicENN Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Neural knowledge-graph embeddings with rule injection."""

from ._logicenn import (
    ArgumentError,
    ConfigError,
    DataError,
    Error,
    FormatError,
    InternalError,
    KnowledgeGraph,
    Model,
    Rule,
    TrainingConfig,
    TrainingError,
    delta_statistics,
    evaluate,
    format_rules,
    generate_family,
    ground,
    load_rules,
    parse_rules,
    rule_penalties,
    train,
)

__all__ = [
    "ArgumentError",
    "ConfigError",
    "DataError",
    "Error",
    "FormatError",
    "InternalError",
    "KnowledgeGraph",
    "Model",
    "Rule",
    "TrainingConfig",
    "TrainingError",
    "delta_statistics",
    "evaluate",
    "format_rules",
    "generate_family",
    "ground",
    "load_rules",
    "parse_rules",
    "rule_penalties",
    "train",
]
