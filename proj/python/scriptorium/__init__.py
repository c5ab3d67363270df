# Copyright 2026 The Scriptorium Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Diplomatic transcription toolkit: policies, layers, metrics, profiling."""

from ._scriptorium import (
    Policy,
    Rules,
    ScriptoriumError,
    align,
    cer,
    density,
    density_svg,
    edit_distance,
    graphemes,
    nfc,
    normalize_provenance,
    parse_manifest,
    rolling_delta,
    tfidf_pca,
    variants,
)

__all__ = [
    "Policy",
    "Rules",
    "ScriptoriumError",
    "align",
    "cer",
    "density",
    "density_svg",
    "edit_distance",
    "graphemes",
    "nfc",
    "normalize_provenance",
    "parse_manifest",
    "rolling_delta",
    "tfidf_pca",
    "variants",
]

__version__ = "0.1.0"
