// Page logic for the heatring demo. All numerics live in the wasm module;
// this file only wires inputs, unpacks flat result vectors and draws.

let wasm;
try {
  wasm = await import("./pkg/heatring_wasm.js");
  await wasm.default();
} catch (err) {
  console.error("wasm package missing or failed to load:", err);
  document.getElementById("missing").style.display = "block";
  for (const id of ["sim-section", "fit-section", "classify-section"]) {
    document.getElementById(id).style.opacity = "0.35";
  }
  throw err;
}

const $ = (id) => document.getElementById(id);

function drawAxes(ctx, w, h, pad) {
  ctx.strokeStyle = "#2c3644";
  ctx.lineWidth = 1;
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
}

// --- section 1: simulation ---------------------------------------------

let sim = null;
let running = false;
let animationHandle = 0;

function simParams() {
  return {
    nodes: Math.max(1, Math.floor(Number($("sim-nodes").value) || 1)),
    alpha: Number($("sim-alpha").value) || 0,
    dt: Number($("sim-dt").value) || 0,
    dx: Number($("sim-dx").value) || 1,
    paper: $("sim-paper").checked,
  };
}

function resetSim() {
  const p = simParams();
  sim = new wasm.Simulation(p.nodes, p.alpha, p.dt, p.dx, p.paper);
  drawSim();
}

function drawSim() {
  const canvas = $("sim-canvas");
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 14;
  ctx.clearRect(0, 0, w, h);
  drawAxes(ctx, w, h, pad);

  const values = sim.values();
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const x = (i) => pad + ((w - 2 * pad) * i) / Math.max(1, values.length - 1);
  const y = (v) => h - pad - ((h - 2 * pad) * (v - lo)) / (hi - lo);

  ctx.strokeStyle = "#5aa7e8";
  ctx.lineWidth = 2;
  ctx.beginPath();
  values.forEach((v, i) => (i === 0 ? ctx.moveTo(x(0), y(v)) : ctx.lineTo(x(i), y(v))));
  ctx.stroke();

  const stable = sim.stable();
  const badge = stable
    ? '<span class="badge ok">stable</span>'
    : '<span class="badge warn">unstable</span>';
  $("sim-readout").innerHTML =
    `step <b>${sim.step_index()}</b>` +
    ` &nbsp; total heat <b>${sim.total_heat().toPrecision(8)}</b>` +
    ` &nbsp; coefficient <b>${sim.coefficient().toPrecision(4)}</b> ${badge}` +
    ` &nbsp; range [<b>${lo.toPrecision(4)}</b>, <b>${hi.toPrecision(4)}</b>]`;
}

function tick() {
  if (!running) return;
  const rate = Math.max(1, Math.floor(Number($("sim-rate").value) || 1));
  sim.step(rate);
  drawSim();
  animationHandle = requestAnimationFrame(tick);
}

$("sim-toggle").addEventListener("click", () => {
  running = !running;
  $("sim-toggle").textContent = running ? "Pause" : "Run";
  if (running) tick();
  else cancelAnimationFrame(animationHandle);
});

$("sim-reset").addEventListener("click", () => {
  running = false;
  $("sim-toggle").textContent = "Run";
  cancelAnimationFrame(animationHandle);
  resetSim();
});

for (const id of ["sim-nodes", "sim-alpha", "sim-dt", "sim-dx", "sim-paper"]) {
  $(id).addEventListener("change", resetSim);
}

resetSim();

// --- section 2: scaling fit ---------------------------------------------

function parseSamples() {
  const threads = [];
  const times = [];
  for (const line of $("fit-samples").value.split("\n")) {
    const fields = line.trim().split(/[\s,]+/).filter((f) => f.length);
    if (fields.length !== 2) continue;
    const p = Number(fields[0]);
    const t = Number(fields[1]);
    if (Number.isFinite(p) && Number.isFinite(t)) {
      threads.push(p);
      times.push(t);
    }
  }
  return { threads, times };
}

function runFit() {
  const { threads, times } = parseSamples();
  const canvas = $("fit-canvas");
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 30;
  ctx.clearRect(0, 0, w, h);
  drawAxes(ctx, w, h, pad);

  const fitted = wasm.fit(new Float64Array(threads), new Float64Array(times));
  if (fitted.length === 0) {
    $("fit-readout").innerHTML =
      "need at least two samples with distinct positive thread counts";
    return;
  }
  const [serial, parallel, r2] = fitted;

  const pMax = Math.max(...threads) * 1.05;
  const tMax = Math.max(...times, serial + parallel) * 1.1;
  const x = (p) => pad + ((w - 2 * pad) * p) / pMax;
  const y = (t) => h - pad - ((h - 2 * pad) * t) / tMax;

  // Fitted curve sampled densely across the thread axis.
  const grid = [];
  for (let i = 1; i <= 200; i++) grid.push((pMax * i) / 200);
  const curve = wasm.predict_times(serial, parallel, new Float64Array(grid));
  ctx.strokeStyle = "#6fbf73";
  ctx.lineWidth = 2;
  ctx.beginPath();
  grid.forEach((p, i) => (i === 0 ? ctx.moveTo(x(p), y(curve[i])) : ctx.lineTo(x(p), y(curve[i]))));
  ctx.stroke();

  ctx.fillStyle = "#5aa7e8";
  threads.forEach((p, i) => {
    ctx.beginPath();
    ctx.arc(x(p), y(times[i]), 4, 0, 2 * Math.PI);
    ctx.fill();
  });

  const speedup8 = (serial + parallel) / (serial + parallel / 8);
  $("fit-readout").innerHTML =
    `serial <b>${serial.toPrecision(6)}</b> s` +
    ` &nbsp; parallel <b>${parallel.toPrecision(6)}</b> s` +
    ` &nbsp; R<sup>2</sup> <b>${r2.toFixed(6)}</b>` +
    ` &nbsp; predicted speedup at 8 threads <b>${speedup8.toPrecision(4)}x</b>`;
}

$("fit-run").addEventListener("click", runFit);
$("fit-samples").addEventListener("change", runFit);
$("fit-noise").addEventListener("click", () => {
  const { threads, times } = parseSamples();
  const lines = threads.map((p, i) => {
    const jitter = 1 + 0.04 * (Math.random() - 0.5);
    return `${p} ${(times[i] * jitter).toPrecision(6)}`;
  });
  $("fit-samples").value = lines.join("\n");
  runFit();
});

runFit();

// --- section 3: classification and COCOMO --------------------------------

function classifyEntries() {
  const rows = [...$("classify-table").querySelectorAll("tr")];
  const labels = [];
  const efforts = [];
  const tAverages = [];
  for (const row of rows) {
    const cells = [...row.querySelectorAll("input")].map((c) => c.value);
    const [label, effort, t2, t20, t40] = cells;
    const numbers = [effort, t2, t20, t40].map(Number);
    if (!label || numbers.some((n) => !Number.isFinite(n))) continue;
    labels.push(label);
    efforts.push(numbers[0]);
    tAverages.push(wasm.t_average_of(numbers[1], numbers[2], numbers[3]));
  }
  return { labels, efforts, tAverages };
}

function runClassify() {
  const { labels, efforts, tAverages } = classifyEntries();
  const canvas = $("classify-canvas");
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 40;
  ctx.clearRect(0, 0, w, h);
  drawAxes(ctx, w, h, pad);

  // Quadrant cross through (0, 0).
  ctx.strokeStyle = "#22303f";
  ctx.beginPath();
  ctx.moveTo(w / 2, pad);
  ctx.lineTo(w / 2, h - pad);
  ctx.moveTo(pad, h / 2);
  ctx.lineTo(w - pad, h / 2);
  ctx.stroke();
  ctx.fillStyle = "#8b96a5";
  ctx.font = "12px system-ui";
  ctx.fillText("less effort", pad + 6, h / 2 - 8);
  ctx.fillText("more effort", w - pad - 72, h / 2 - 8);
  ctx.fillText("faster", w / 2 + 8, pad + 14);
  ctx.fillText("slower", w / 2 + 8, h - pad - 6);

  const scores = wasm.classify_scores(
    new Float64Array(efforts),
    new Float64Array(tAverages),
  );
  if (scores.length === 0) {
    $("classify-readout").innerHTML = "no complete rows to place";
    return;
  }

  const x = (v) => pad + ((w - 2 * pad) * (v + 1)) / 2;
  const y = (v) => h - pad - ((h - 2 * pad) * (v + 1)) / 2;
  const colors = ["#5aa7e8", "#6fbf73", "#e0b45a", "#e06c5a"];
  const placed = [];
  labels.forEach((label, i) => {
    const px = scores[2 * i];
    const py = scores[2 * i + 1];
    ctx.fillStyle = colors[i % colors.length];
    ctx.beginPath();
    ctx.arc(x(px), y(py), 6, 0, 2 * Math.PI);
    ctx.fill();
    ctx.fillText(label, x(px) + 10, y(py) + 4);
    placed.push(`${label} (${px.toFixed(2)}, ${py.toFixed(2)})`);
  });

  const loc = Math.max(0, Math.floor(Number($("cocomo-loc").value) || 0));
  const [kloc, effortPm, schedule] = wasm.cocomo_numbers(loc);
  $("classify-readout").innerHTML =
    placed.map((p) => `<b>${p}</b>`).join(" &nbsp; ") +
    `<br>COCOMO organic at ${loc} lines: <b>${kloc.toPrecision(4)}</b> kloc,` +
    ` effort <b>${effortPm.toPrecision(4)}</b> person-months,` +
    ` schedule <b>${schedule.toPrecision(4)}</b> months`;
}

$("classify-run").addEventListener("click", runClassify);
$("cocomo-loc").addEventListener("change", runClassify);
$("classify-table").addEventListener("change", runClassify);

runClassify();
