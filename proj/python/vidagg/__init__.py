# Copyright 2026 The vidagg Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Long-video text retrieval over per-frame embeddings."""

from ._vidagg import (
    DEFAULT_FRAMES,
    DEFAULT_TAU,
    Index,
    ScorerWeights,
    VidaggError,
    aggregation_weights,
    eval_report,
    frame_scores,
    geometric_mean_recall,
    joint_attention_scores,
    l2_normalize,
    load_scorer,
    multilabel_map,
    random_scorer,
    rank_stats,
    read_store,
    recall_at_k,
    self_attention_scores,
    similarity,
    softmax_weights,
    topk_select,
    uniform_subsample,
    write_store,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
