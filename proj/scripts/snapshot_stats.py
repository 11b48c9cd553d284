#!/usr/bin/env python3
# Copyright 2026 The kged Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Snapshot statistics straight from the raw TSV, written as a sidecar JSON.

usage: snapshot_stats.py SNAPSHOT [SNAPSHOT ...]   (writes SNAPSHOT.stats.json)
"""

import json
import sys
from collections import defaultdict, deque
from pathlib import Path


def stats(path):
    sc, ty = [], []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        if not raw or raw.startswith("#"):
            continue
        fields = raw.split("\t")
        if fields[0] == "SC":
            sc.append((fields[1], fields[2]))
        elif fields[0] == "TY":
            ty.append((fields[1], fields[2]))

    classes = {"Thing"}
    for child, parent in sc:
        classes.update((child, parent))
    for _, cls in ty:
        classes.add(cls)

    below = defaultdict(set)  # parent -> class children
    for child, parent in sc:
        below[parent].add(child)
    for entity, cls in ty:
        if entity in classes:
            below[cls].add(entity)

    depth = {"Thing": 0}
    queue = deque(["Thing"])
    while queue:
        node = queue.popleft()
        for child in sorted(below[node]):
            if child not in depth:
                depth[child] = depth[node] + 1
                queue.append(child)

    typing = defaultdict(set)
    for entity, cls in ty:
        typing[entity].add(cls)
    depths = [min(depth[c] for c in cs) for cs in typing.values()]
    fanout = [len(below[c]) for c in classes if below[c]]
    return {
        "instances": len(typing),
        "classes": len(classes),
        "avg_tree_depth": sum(depths) / len(depths) if depths else 0.0,
        "avg_branching_factor": sum(fanout) / len(fanout) if fanout else 0.0,
    }


def main(argv):
    for path in argv[1:]:
        out = Path(path).with_suffix(".stats.json")
        out.write_text(json.dumps(stats(path), indent=2) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main(sys.argv)
