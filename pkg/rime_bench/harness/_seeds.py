# Copyright 2026 The rime-bench Authors
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
"""Stable seed derivation for campaign runs and instances."""

import hashlib

# Seeds stay below 2**63 so they fit a signed 64-bit integer.
_SEED_MASK = (1 << 63) - 1


def derive_seed(base_seed: int, *parts) -> int:
    """Hashes a base seed together with labels into a new seed.

    The result depends only on the arguments, never on how many other seeds
    a campaign derives.
    """
    text = '/'.join(str(part) for part in (base_seed,) + parts)
    digest = hashlib.blake2b(text.encode('utf-8'), digest_size=8).digest()
    return int.from_bytes(digest, 'big') & _SEED_MASK


def run_seed(base_seed: int, variant: str, instance_id: str,
             run_index: int) -> int:
    return derive_seed(base_seed, variant, instance_id, run_index)


def instance_seed(base_seed: int, instance_id: str) -> int:
    """Seed of an instance's shifts and rotations, shared by every variant."""
    return derive_seed(base_seed, 'instance', instance_id)
