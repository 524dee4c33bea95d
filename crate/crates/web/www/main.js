import init, { KgPulse, PhaseSpace, keyint, fit_power_law } from "./pkg/vkg_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => parseFloat($(id).value);

function plotLines(canvas, series, colors) {
  const g = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  g.clearRect(0, 0, w, h);
  let lo = Infinity, hi = -Infinity;
  for (const s of series) for (const v of s) { lo = Math.min(lo, v); hi = Math.max(hi, v); }
  if (hi - lo < 1e-300) { hi = lo + 1; }
  const pad = 0.05 * (hi - lo);
  lo -= pad; hi += pad;
  g.strokeStyle = "#ccc";
  const y0 = h - ((0 - lo) / (hi - lo)) * h;
  g.beginPath(); g.moveTo(0, y0); g.lineTo(w, y0); g.stroke();
  series.forEach((s, i) => {
    g.strokeStyle = colors[i];
    g.beginPath();
    s.forEach((v, j) => {
      const x = (j / (s.length - 1)) * w, y = h - ((v - lo) / (hi - lo)) * h;
      j ? g.lineTo(x, y) : g.moveTo(x, y);
    });
    g.stroke();
  });
}

function plotImage(canvas, values, nx, nv) {
  const g = canvas.getContext("2d");
  const img = g.createImageData(nx, nv);
  let hi = 0;
  for (const v of values) hi = Math.max(hi, v);
  for (let iv = 0; iv < nv; iv++) {
    for (let ix = 0; ix < nx; ix++) {
      const a = Math.max(0, values[iv * nx + ix]) / (hi || 1);
      const p = 4 * ((nv - 1 - iv) * nx + ix);
      img.data[p] = 255 * Math.sqrt(a);
      img.data[p + 1] = 255 * a * a;
      img.data[p + 2] = 80 + 175 * (1 - a);
      img.data[p + 3] = 255;
    }
  }
  const tmp = new OffscreenCanvas(nx, nv);
  tmp.getContext("2d").putImageData(img, 0, 0);
  g.imageSmoothingEnabled = false;
  g.drawImage(tmp, 0, 0, canvas.width, canvas.height);
}

await init();

// Klein-Gordon pulse
let pulse, pulsePlaying = false;
function resetPulse() {
  pulse = new KgPulse(512, 60, num("kg-width"), num("kg-k"));
  drawPulse();
}
function drawPulse() {
  plotLines($("kg-plot"), [pulse.phi()], ["#1f5fbf"]);
  $("kg-out").textContent =
    `t = ${pulse.time().toFixed(2)}   ‖φ‖∞ = ${pulse.sup_norm().toExponential(4)}   energy = ${pulse.energy().toExponential(8)}`;
}
function pulseFrame() {
  if (!pulsePlaying) return;
  pulse.advance(0.1);
  drawPulse();
  requestAnimationFrame(pulseFrame);
}
$("kg-reset").onclick = resetPulse;
$("kg-play").onclick = () => { pulsePlaying = !pulsePlaying; pulseFrame(); };
resetPulse();

// Phase space
let sim, simPlaying = false, history = { t: [], rho: [] };
function resetSim() {
  try {
    sim = new PhaseSpace(num("ps-eps"), num("ps-phi"), $("ps-coupling").checked);
  } catch (e) {
    $("ps-out").textContent = `error: ${e.message}`;
    return;
  }
  history = { t: [], rho: [] };
  record();
  drawSim();
}
function record() {
  history.t.push(sim.time());
  history.rho.push(sim.norms()[0]);
}
function drawSim() {
  plotImage($("ps-f"), sim.f(), sim.nx(), sim.nv());
  plotLines($("ps-lines"), [sim.density(), sim.electric()], ["#b03a2e", "#1f5fbf"]);
  const [rho, e, eosc, er] = sim.norms();
  $("ps-out").textContent =
    `t = ${sim.time().toFixed(2)} / ${sim.horizon()}   ‖ρ‖∞ = ${rho.toExponential(3)}   ‖E‖∞ = ${e.toExponential(3)}   ` +
    `‖E_osc+‖∞ = ${eosc.toExponential(3)}   ‖E_r‖∞ = ${er.toExponential(3)}\n` +
    `x ∈ [−${sim.half_length()}, ${sim.half_length()}], v ∈ [−${sim.v_max()}, ${sim.v_max()}]   (red ρ, blue E)`;
}
function stepSim(n) {
  const taken = sim.advance(n);
  if (taken > 0) record();
  drawSim();
  return taken;
}
function simFrame() {
  if (!simPlaying) return;
  if (stepSim(5) === 0) { simPlaying = false; return; }
  requestAnimationFrame(simFrame);
}
$("ps-reset").onclick = resetSim;
$("ps-step").onclick = () => stepSim(20);
$("ps-play").onclick = () => { simPlaying = !simPlaying; simFrame(); };
resetSim();

// Identity and fits
$("ki-run").onclick = () => {
  try {
    const [lr, li, rr, ri, res] = keyint($("ki-plus").checked, num("ki-k"), num("ki-v"), num("ki-x"), num("ki-t"));
    $("ki-out").textContent =
      `lhs = ${lr.toExponential(10)} ${li >= 0 ? "+" : "−"} ${Math.abs(li).toExponential(10)} i\n` +
      `rhs = ${rr.toExponential(10)} ${ri >= 0 ? "+" : "−"} ${Math.abs(ri).toExponential(10)} i\n` +
      `relative residual = ${res.toExponential(3)}`;
  } catch (e) {
    $("ki-out").textContent = `error: ${e.message}`;
  }
};
$("fit-run").onclick = () => {
  try {
    const [g, r] = fit_power_law(Float64Array.from(history.t), Float64Array.from(history.rho), num("fit-t0"), num("fit-t1"));
    $("fit-out").textContent = `‖ρ‖∞ ~ t^${g.toFixed(4)}   (rms log residual ${r.toExponential(2)}, ${history.t.length} samples)`;
  } catch (e) {
    $("fit-out").textContent = `error: ${e.message}`;
  }
};
