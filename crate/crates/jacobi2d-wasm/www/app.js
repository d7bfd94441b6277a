import init, {
  example_field,
  band_slice,
  spectrum_report,
  verify_report,
} from "./pkg/jacobi2d_wasm.js";

const TAU = 2 * Math.PI;
const NX = 160; // x samples per band slice
const el = (id) => document.getElementById(id);

let lastSpectrum = null;

function parse(json) {
  const value = JSON.parse(json);
  if (value.error) throw new Error(value.error);
  return value;
}

function showError(message) {
  el("error-box").textContent = message ? String(message) : "";
}

function fieldJson() {
  return el("field").value;
}

function buildField() {
  const name = el("example").value;
  const p1 = Number(el("p1").value);
  const p2 = Number(el("p2").value);
  const seed = Number(el("seed").value) >>> 0;
  el("field").value = example_field(name, p1, p2, seed);
}

// ---------------------------------------------------------------- plotting

function frame(ctx, xlo, xhi, ylo, yhi) {
  const { width: w, height: h } = ctx.canvas;
  const pad = { l: 52, r: 14, t: 12, b: 28 };
  const sx = (x) => pad.l + ((x - xlo) / (xhi - xlo)) * (w - pad.l - pad.r);
  const sy = (y) => h - pad.b - ((y - ylo) / (yhi - ylo)) * (h - pad.t - pad.b);
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#2c3642";
  ctx.fillStyle = "#93a1b3";
  ctx.font = "11px system-ui";
  ctx.lineWidth = 1;
  const yticks = 6;
  for (let i = 0; i <= yticks; i++) {
    const v = ylo + ((yhi - ylo) * i) / yticks;
    const y = sy(v);
    ctx.beginPath();
    ctx.moveTo(pad.l, y);
    ctx.lineTo(w - pad.r, y);
    ctx.stroke();
    ctx.fillText(v.toFixed(2), 6, y + 4);
  }
  return { sx, sy, pad, w, h };
}

function drawBands(slice) {
  const ctx = el("bands").getContext("2d");
  const lo = Math.min(...slice.lower);
  const hi = Math.max(...slice.upper);
  const margin = 0.06 * (hi - lo || 1);
  const f = frame(ctx, 0, TAU, lo - margin, hi + margin);

  // envelope strips
  for (let n = 0; n < slice.lower.length; n++) {
    const top = f.sy(slice.upper[n]);
    const bottom = f.sy(slice.lower[n]);
    ctx.fillStyle = "rgba(94, 140, 190, 0.18)";
    ctx.fillRect(f.sx(0), top, f.sx(TAU) - f.sx(0), bottom - top);
    ctx.strokeStyle = "rgba(94, 140, 190, 0.55)";
    for (const yv of [top, bottom]) {
      ctx.beginPath();
      ctx.moveTo(f.sx(0), yv);
      ctx.lineTo(f.sx(TAU), yv);
      ctx.stroke();
    }
  }

  // band curves
  ctx.lineWidth = 1.6;
  for (let n = 0; n < slice.bands.length; n++) {
    const hue = 190 + (130 * n) / slice.bands.length;
    ctx.strokeStyle = `hsl(${hue}, 75%, 62%)`;
    ctx.beginPath();
    slice.x.forEach((xv, k) => {
      const px = f.sx(xv);
      const py = f.sy(slice.bands[n][k]);
      k === 0 ? ctx.moveTo(px, py) : ctx.lineTo(px, py);
    });
    // close the periodic curve at x = 2π
    ctx.lineTo(f.sx(TAU), f.sy(slice.bands[n][0]));
    ctx.stroke();
  }

  // x axis labels
  ctx.fillStyle = "#93a1b3";
  for (const [t, label] of [[0, "0"], [Math.PI, "π"], [TAU, "2π"]]) {
    ctx.fillText(label, f.sx(t) - 4, f.h - 8);
  }
}

function drawSpectrum(report) {
  const ctx = el("spectrum").getContext("2d");
  const bounds = [
    ["measure (grid)", report.measure, "#62d196"],
    [`r_min at (${report.r_min.alpha}, ${report.r_min.beta})`, report.r_min.value, "#5ec8f2"],
    ["envelope sum", report.envelope_sum, "#b58bf7"],
    ["norm bound", report.norm_bound, "#ef9f6b"],
  ];
  if (report.schrodinger_bound !== null) {
    bounds.push(["Schrödinger bound", report.schrodinger_bound, "#e8d06b"]);
  }

  const lo = Math.min(...report.intervals.map((iv) => iv[0]));
  const hi = Math.max(...report.intervals.map((iv) => iv[1]));
  const margin = 0.08 * (hi - lo || 1);
  const { width: w, height: h } = ctx.canvas;
  ctx.clearRect(0, 0, w, h);
  const pad = { l: 52, r: 14 };
  const sx = (x) => pad.l + ((x - (lo - margin)) / (hi - lo + 2 * margin)) * (w - pad.l - pad.r);

  // number line with the interval union
  const lineY = 48;
  ctx.strokeStyle = "#2c3642";
  ctx.beginPath();
  ctx.moveTo(pad.l, lineY);
  ctx.lineTo(w - 14, lineY);
  ctx.stroke();
  ctx.fillStyle = "#93a1b3";
  ctx.font = "11px system-ui";
  for (const v of [lo, hi]) {
    ctx.fillText(v.toFixed(3), sx(v) - 12, lineY - 18);
  }
  ctx.lineWidth = 9;
  ctx.strokeStyle = "#62d196";
  ctx.lineCap = "round";
  for (const [a, b] of report.intervals) {
    ctx.beginPath();
    ctx.moveTo(sx(a), lineY);
    ctx.lineTo(sx(b), lineY);
    ctx.stroke();
  }
  ctx.lineCap = "butt";

  // bound lengths as bars sharing the same scale
  const longest = Math.max(...bounds.map(([, v]) => v));
  const barX = (v) => pad.l + (v / (longest || 1)) * (w - pad.l - 14);
  let y = 92;
  ctx.lineWidth = 1;
  for (const [label, value, color] of bounds) {
    ctx.fillStyle = color;
    ctx.globalAlpha = 0.75;
    ctx.fillRect(pad.l, y - 9, barX(value) - pad.l, 12);
    ctx.globalAlpha = 1;
    ctx.fillStyle = "#e8edf3";
    ctx.fillText(`${label}: ${value.toFixed(6)}`, pad.l + 6, y + 1);
    y += 26;
  }

  const table = el("bounds-table");
  table.innerHTML = "";
  const rows = [
    ["intervals", report.intervals.map(([a, b]) => `[${a.toFixed(6)}, ${b.toFixed(6)}]`).join("  ")],
    ["measure", report.measure.toFixed(9)],
    ["grid", `${report.grid[0]} × ${report.grid[1]}`],
  ];
  for (const [k, v] of rows) {
    const tr = document.createElement("tr");
    tr.innerHTML = `<td>${k}</td><td>${v}</td>`;
    table.appendChild(tr);
  }
}

function card(title, pass, detail) {
  return `<div class="card ${pass ? "pass" : "fail"}">
    <b>${title}</b>
    <span class="status">${pass ? "PASS" : "FAIL"}</span>
    <div class="detail">${detail}</div>
  </div>`;
}

function runVerify() {
  try {
    showError("");
    const n1 = Number(el("n1").value);
    const n2 = Number(el("n2").value);
    const report = parse(verify_report(fieldJson(), n1, n2, Number(el("seed").value) >>> 0));
    const enc = report.enclosure_check;
    const sand = report.sandwich_check;
    const di = report.direct_integral_check;
    el("verify-cards").innerHTML =
      card("envelope enclosure", enc.pass, `worst margin ${enc.worst_margin.toExponential(2)} on ${enc.grid[0]}×${enc.grid[1]} grid`) +
      card("C ± J1 ⪰ 0", sand.pass, `worst min eigenvalue ${sand.worst_min_eigenvalue.toExponential(2)} over ${sand.samples} momenta`) +
      card("torus = fibers", di.pass, `max |Δλ| ${di.max_abs_diff.toExponential(2)} on dim ${di.dimensions.torus}`);
  } catch (e) {
    showError(e.message);
  }
}

function redraw() {
  try {
    showError("");
    const yIndex = Number(el("yslider").value);
    const y = (TAU * yIndex) / 128;
    el("ylabel").textContent = `y = ${y.toFixed(3)}`;
    drawBands(parse(band_slice(fieldJson(), NX, y)));
    lastSpectrum = parse(spectrum_report(fieldJson(), 64, 64));
    drawSpectrum(lastSpectrum);
  } catch (e) {
    showError(e.message);
  }
}

function redrawBandsOnly() {
  try {
    showError("");
    const y = (TAU * Number(el("yslider").value)) / 128;
    el("ylabel").textContent = `y = ${y.toFixed(3)}`;
    drawBands(parse(band_slice(fieldJson(), NX, y)));
    if (lastSpectrum) drawSpectrum(lastSpectrum);
  } catch (e) {
    showError(e.message);
  }
}

async function main() {
  await init();
  buildField();
  redraw();
  el("build").addEventListener("click", () => {
    buildField();
    redraw();
  });
  el("field").addEventListener("change", redraw);
  el("yslider").addEventListener("input", redrawBandsOnly);
  el("verify").addEventListener("click", runVerify);
}

main();
