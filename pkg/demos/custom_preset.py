"""
A preset from JSON
==================

Writes a gasket preset to disk, loads it back and runs the self-checks.
"""

import json
import tempfile
from pathlib import Path

from fractal_complexity import load_preset
from fractal_complexity.presets import triangular_gasket
from fractal_complexity.verification import verify_preset

# side-4 gasket: ten cells
preset = triangular_gasket("sg4", 4)
path = Path(tempfile.mkdtemp()) / "sg4.json"
path.write_text(preset.to_json())
print(json.loads(path.read_text())["m"], "cells")

loaded = load_preset(str(path))
for r in verify_preset(loaded):
    print(f"{'ok  ' if r.passed else 'FAIL'} {r.name}: {r.detail}")
