import init, {
  gamma_star, region_map, region_name, pmf_curve, sample_gains, dynamics_trace,
} from "./pkg/mccdma_web.js";

const REGION_COLOURS = ["#d95f02", "#7570b3", "#1b9e77", "#66a61e", "#e6ab02", "#bbbbbb"];
const SERIES = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666"];
const GAINS = [4, 6, 8, 12, 16, 24, 32, 48, 64, 96, 128, 192, 256, 384, 512];
const SPAN_DB = 10;

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function legend(el, entries) {
  el.innerHTML = entries
    .map(([label, colour]) => `<span><i style="background:${colour}"></i>${label}</span>`)
    .join("");
}

function drawRegions() {
  const n = num("region-n");
  $("region-n-value").textContent = n;
  const canvas = $("region");
  const ctx = canvas.getContext("2d");
  const res = 200;
  const codes = region_map(n, 100, res, SPAN_DB);
  const img = ctx.createImageData(res, res);
  codes.forEach((code, i) => {
    const hex = REGION_COLOURS[code];
    img.data.set([1, 3, 5].map((o) => parseInt(hex.slice(o, o + 2), 16)).concat(255), 4 * i);
  });
  const off = new OffscreenCanvas(res, res);
  off.getContext("2d").putImageData(img, 0, 0);
  ctx.imageSmoothingEnabled = false;
  ctx.drawImage(off, 0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#0006";
  ctx.beginPath();
  ctx.moveTo(canvas.width / 2, 0); ctx.lineTo(canvas.width / 2, canvas.height);
  ctx.moveTo(0, canvas.height / 2); ctx.lineTo(canvas.width, canvas.height / 2);
  ctx.stroke();
  ctx.fillStyle = "#000";
  ctx.fillText(`-${SPAN_DB} dB`, 4, canvas.height - 4);
  ctx.fillText(`+${SPAN_DB} dB`, canvas.width - 40, canvas.height - 4);
}

// Plots series over x; `log` picks a log-scaled x axis.
function plot(canvas, xs, series, { log = false, ymin = 0, ymax = 1, xlabel = "", ylabel = "" } = {}) {
  const ctx = canvas.getContext("2d");
  const pad = { l: 50, r: 10, t: 10, b: 30 };
  const w = canvas.width - pad.l - pad.r;
  const h = canvas.height - pad.t - pad.b;
  const tx = log ? Math.log : (x) => x;
  const [x0, x1] = [tx(xs[0]), tx(xs[xs.length - 1])];
  const sx = (x) => pad.l + (x1 === x0 ? w / 2 : ((tx(x) - x0) / (x1 - x0)) * w);
  const sy = (y) => pad.t + (1 - (y - ymin) / (ymax - ymin || 1)) * h;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad.l, pad.t, w, h);
  ctx.fillStyle = "#444";
  xs.forEach((x) => ctx.fillText(String(x), sx(x) - 8, canvas.height - 14));
  ctx.fillText(ymax.toPrecision(3), 4, pad.t + 8);
  ctx.fillText(ymin.toPrecision(3), 4, pad.t + h);
  ctx.fillText(xlabel, pad.l + w / 2 - 20, canvas.height - 2);
  ctx.fillText(ylabel, 4, pad.t + h / 2);
  for (const { ys, colour, dashed, dots } of series) {
    ctx.strokeStyle = ctx.fillStyle = colour;
    ctx.setLineDash(dashed ? [5, 4] : []);
    ctx.beginPath();
    let started = false;
    ys.forEach((y, i) => {
      if (!Number.isFinite(y)) return;
      started ? ctx.lineTo(sx(xs[i]), sy(y)) : ctx.moveTo(sx(xs[i]), sy(y));
      started = true;
    });
    if (!dots) ctx.stroke();
    if (dots) ys.forEach((y, i) => Number.isFinite(y) && ctx.fillRect(sx(xs[i]) - 2, sy(y) - 2, 4, 4));
  }
  ctx.setLineDash([]);
}

function drawPmf() {
  const k = num("pmf-k");
  const out = pmf_curve(k, 2, new Uint32Array(GAINS), num("pmf-trials"), num("pmf-seed"));
  const stride = 2 * (k + 2);
  const column = (c) => GAINS.map((_, i) => out[i * stride + c]);
  const labels = [...Array(k + 1).keys()].map((m) => `P(${m})`).concat("no equilibrium");
  const series = [];
  labels.forEach((_, c) => {
    const colour = SERIES[c % SERIES.length];
    series.push({ ys: column(c), colour, dashed: true });
    series.push({ ys: column(k + 2 + c), colour, dots: true });
  });
  plot($("pmf"), GAINS, series, { log: true, xlabel: "N", ylabel: "prob" });
  legend($("pmf-legend"), labels.map((l, c) => [l, SERIES[c % SERIES.length]])
    .concat([["dashed: closed form (K = 2 only), dots: simulation", "transparent"]]));
}

function drawDynamics() {
  const [k, d] = [num("dyn-k"), num("dyn-d")];
  const gains = sample_gains(k, d, num("dyn-seed"));
  const trace = dynamics_trace(gains, k, d, num("dyn-n"), 20);
  const powers = trace.powers();
  const rounds = [...Array(trace.rounds() + 1).keys()];
  const dbw = (p) => (p > 0 ? 10 * Math.log10(p) : NaN);
  const series = [];
  let lo = Infinity, hi = -Infinity;
  for (let u = 0; u < k; u++) {
    for (let c = 0; c < d; c++) {
      const ys = rounds.map((r) => dbw(powers[r * k * d + u * d + c]));
      ys.filter(Number.isFinite).forEach((y) => { lo = Math.min(lo, y); hi = Math.max(hi, y); });
      series.push({ ys, colour: SERIES[u % SERIES.length], dashed: c > 0 });
    }
  }
  if (!Number.isFinite(lo)) [lo, hi] = [-160, -140];
  plot($("dyn"), rounds, series, { ymin: lo - 1, ymax: hi + 1, xlabel: "round", ylabel: "dBW" });
  $("dyn-summary").textContent =
    `${trace.converged() ? "converged" : "no equilibrium reached"} after ${trace.rounds()} rounds; ` +
    "one colour per user, line style per carrier (solid = carrier 1).";
}

function guarded(fn) {
  return () => {
    try {
      fn();
      $("status").textContent = `γ* = ${gamma_star(100).toFixed(4)}`;
    } catch (e) {
      $("status").textContent = `error: ${e.message ?? e}`;
    }
  };
}

await init();
legend($("region-legend"), REGION_COLOURS.map((c, i) => [region_name(i), c]));
$("region-n").addEventListener("input", guarded(drawRegions));
$("pmf-run").addEventListener("click", guarded(drawPmf));
$("dyn-run").addEventListener("click", guarded(drawDynamics));
guarded(drawRegions)();
guarded(drawPmf)();
guarded(drawDynamics)();
