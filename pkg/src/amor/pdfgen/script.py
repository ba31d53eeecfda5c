"""Document-level viewer script that flips frame layers on a timer.

The first line holds the playback parameters as a JSON object so the
inspector can recover them without evaluating JavaScript.
"""
from __future__ import annotations

import json

LAYER_PREFIX = "amor-frame-"
PARAMS_PREFIX = "var AMOR = "

_BODY = """\
var AMOR_doc = this;
var AMOR_layers = [];
var AMOR_index = 0;
var AMOR_timer = null;

function AMOR_collect() {
  var all = AMOR_doc.getOCGs() || [];
  AMOR_layers = new Array(AMOR.frames);
  for (var i = 0; i < all.length; i++) {
    var name = all[i].name;
    if (name.indexOf(AMOR.prefix) === 0) {
      AMOR_layers[parseInt(name.substring(AMOR.prefix.length), 10) - 1] = all[i];
    }
  }
}

function AMOR_show(k) {
  for (var i = 0; i < AMOR_layers.length; i++) {
    if (AMOR_layers[i]) AMOR_layers[i].state = (i === k);
  }
  AMOR_index = k;
}

function AMOR_startIndex() {
  if (AMOR.startMode === "viewing_time") {
    return Math.floor(Date.now() / (1000 / AMOR.fps)) % AMOR.frames;
  }
  return AMOR.startFrame;
}

function AMOR_pause() {
  if (AMOR_timer !== null) {
    app.clearInterval(AMOR_timer);
    AMOR_timer = null;
  }
}

function AMOR_tick() {
  var next = AMOR_index + 1;
  if (next >= AMOR.frames) {
    if (!AMOR.loop) {
      AMOR_pause();
      return;
    }
    next = 0;
  }
  AMOR_show(next);
}

function AMOR_play() {
  if (AMOR_timer === null) {
    if (!AMOR.loop && AMOR_index >= AMOR.frames - 1) AMOR_show(0);
    AMOR_timer = app.setInterval("AMOR_tick()", 1000 / AMOR.fps);
  }
}

AMOR_collect();
AMOR_show(AMOR_startIndex());
if (AMOR.autoplay) AMOR_play();
"""


def viewer_script(frames: int, fps: float, loop: bool, autoplay: bool, controls: bool,
                  start_mode: str, start_frame: int) -> str:
    params = {
        "frames": frames,
        "fps": fps,
        "loop": loop,
        "autoplay": autoplay,
        "controls": controls,
        "startMode": start_mode,
        "startFrame": start_frame,
        "prefix": LAYER_PREFIX,
    }
    return PARAMS_PREFIX + json.dumps(params, sort_keys=True) + ";\n" + _BODY


def parse_script_params(script: str) -> dict:
    first = script.split("\n", 1)[0]
    if not first.startswith(PARAMS_PREFIX) or not first.endswith(";"):
        raise ValueError("viewer script does not start with a parameter block")
    return json.loads(first[len(PARAMS_PREFIX):-1])
