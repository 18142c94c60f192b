import init, { extremal_and_exposed, maximize, genericity } from "./pkg/phiconv_web.js";

const canvas = document.getElementById("plot");
const ctx = canvas.getContext("2d");
const $ = (id) => document.getElementById(id);
const PAD = 30;

const state = {
  points: [[0, 0], [1, 0], [0, 1], [1, 1], [0.5, 0.5]],
  centre: [0.4, 0.45],
  marks: {},
};

// the unit square fills the canvas inside a margin; y grows upwards
const toPixel = ([x, y]) => [PAD + x * (canvas.width - 2 * PAD), canvas.height - PAD - y * (canvas.height - 2 * PAD)];
const fromPixel = (px, py) => [
  (px - PAD) / (canvas.width - 2 * PAD),
  (canvas.height - PAD - py) / (canvas.height - 2 * PAD),
];
const round = (v) => Math.round(v * 1000) / 1000;

function setup() {
  const family = {
    affine: { kind: "affine" },
    poly2: { kind: "polynomial", degree: 2 },
    lip: { kind: "lipschitz", basepoint: 0 },
    lipfull: { kind: "lipschitz", basepoint: 0, full: true },
  }[$("family").value];
  const field = {
    quadratic: { kind: "quadratic", matrix: [[1, 0], [0, 1]], center: state.centre },
    constant: { kind: "constant", value: 0 },
    linear: { kind: "linear", direction: [1, 0] },
  }[$("field").value];
  return JSON.stringify({ cloud: { points: state.points }, family, functions: [field] });
}

function draw() {
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#e0e0e0";
  ctx.strokeRect(PAD, PAD, canvas.width - 2 * PAD, canvas.height - 2 * PAD);

  const { extremal, exposed, maximizer, unique, counts } = state.marks;
  const total = counts ? counts.reduce((a, b) => a + b, 0) : 0;
  state.points.forEach((p, i) => {
    const [x, y] = toPixel(p);
    if (counts && counts[i] > 0) {
      ctx.fillStyle = "rgba(230, 81, 0, 0.25)";
      ctx.beginPath();
      ctx.arc(x, y, 6 + 40 * Math.sqrt(counts[i] / total), 0, 2 * Math.PI);
      ctx.fill();
    }
    ctx.fillStyle = exposed?.has(i) ? "#1565c0" : "#555";
    ctx.beginPath();
    ctx.arc(x, y, 4, 0, 2 * Math.PI);
    ctx.fill();
    if (extremal?.has(i)) {
      ctx.strokeStyle = "#2e7d32";
      ctx.lineWidth = 2;
      ctx.beginPath();
      ctx.arc(x, y, 8, 0, 2 * Math.PI);
      ctx.stroke();
    }
    for (const [k, r] of [[maximizer, 12], [unique, 16]]) {
      if (k === i) {
        ctx.strokeStyle = "#e65100";
        ctx.lineWidth = 2;
        ctx.beginPath();
        ctx.arc(x, y, r, 0, 2 * Math.PI);
        ctx.stroke();
      }
    }
    ctx.fillStyle = "#777";
    ctx.fillText(String(i), x + 6, y - 6);
  });
  if ($("field").value === "quadratic") {
    const [cx, cy] = toPixel(state.centre);
    ctx.strokeStyle = "#8e24aa";
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    ctx.moveTo(cx - 6, cy - 6); ctx.lineTo(cx + 6, cy + 6);
    ctx.moveTo(cx + 6, cy - 6); ctx.lineTo(cx - 6, cy + 6);
    ctx.stroke();
  }
}

function show(summary, reports) {
  const worst = reports.map((r) => r.status.code).find((c) => c !== "ok") ?? "ok";
  const problem = reports.find((r) => r.status.code !== "ok")?.status;
  $("status").className = worst;
  $("status").textContent = problem
    ? `${summary} (${problem.kind}: ${problem.detail}${problem.path ? ` at ${problem.path}` : ""})`
    : summary;
  $("output").textContent = JSON.stringify(reports, null, 2);
}

function runExtremal() {
  const res = JSON.parse(extremal_and_exposed(setup()));
  const ext = res.extremal.payload?.points ?? [];
  const exp = res.exposed.payload?.points ?? [];
  state.marks = { extremal: new Set(ext), exposed: new Set(exp) };
  draw();
  show(`extremal ${JSON.stringify(ext)}, exposed ${JSON.stringify(exp)}`, [res.extremal, res.exposed]);
}

function runMaximize() {
  const eps = Number($("epsilon").value);
  const res = JSON.parse(maximize(setup(), eps));
  const witness = res.bauer.payload?.witness;
  const pert = res.perturb.payload?.perturbation;
  state.marks = { maximizer: witness?.point, unique: pert?.uniquePoint };
  draw();
  const parts = [];
  if (witness) parts.push(`extremal maximizer ${witness.point} (max ${round(witness.maxValue)})`);
  if (pert) parts.push(`perturbed maximizer ${pert.uniquePoint}, ρ = ${pert.rhoDistance.toExponential(3)}, gap ${pert.gap.toExponential(3)}`);
  show(parts.join("; ") || "no result", [res.bauer, res.perturb]);
}

function runGenericity() {
  const t0 = performance.now();
  const res = JSON.parse(
    genericity(setup(), Number($("epsilon").value), Number($("samples").value) >>> 0, Number($("seed").value) >>> 0),
  );
  const ms = performance.now() - t0;
  const counts = new Array(state.points.length).fill(0);
  for (const s of res.samples) counts[s.argmax] += 1;
  state.marks = { counts };
  draw();
  const g = res.report.payload?.report;
  show(
    g
      ? `unique in ${g.uniqueSamples}/${g.samples} samples, extremal fraction ${round(g.extremalFraction)} (${Math.round(ms)} ms)`
      : "no result",
    [res.report],
  );
}

canvas.addEventListener("click", (ev) => {
  const r = canvas.getBoundingClientRect();
  const p = fromPixel(ev.clientX - r.left, ev.clientY - r.top).map(round);
  if (ev.shiftKey) {
    if (state.points.length <= 2) return;
    const d = state.points.map(([x, y]) => (x - p[0]) ** 2 + (y - p[1]) ** 2);
    state.points.splice(d.indexOf(Math.min(...d)), 1);
  } else {
    state.points.push(p);
  }
  state.marks = {};
  draw();
});

canvas.addEventListener("contextmenu", (ev) => {
  ev.preventDefault();
  const r = canvas.getBoundingClientRect();
  state.centre = fromPixel(ev.clientX - r.left, ev.clientY - r.top).map(round);
  state.marks = {};
  draw();
});

$("random").addEventListener("click", () => {
  for (let k = 0; k < 10; k++) state.points.push([round(Math.random()), round(Math.random())]);
  state.marks = {};
  draw();
});
$("clear").addEventListener("click", () => {
  state.points = [[0.2, 0.2], [0.8, 0.8]];
  state.marks = {};
  draw();
});
$("field").addEventListener("change", draw);
$("run-extremal").addEventListener("click", runExtremal);
$("run-maximize").addEventListener("click", runMaximize);
$("run-genericity").addEventListener("click", runGenericity);

await init();
$("status").textContent = "ready";
draw();
