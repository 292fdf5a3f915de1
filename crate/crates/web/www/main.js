import init, { Demo } from "./pkg/ipf_track_web.js";

const $ = (id) => document.getElementById(id);
const view = $("view");
const ctx = view.getContext("2d");
const status = $("status");
const dofs = [...document.querySelectorAll(".dof")];
const frame = $("frame");
let demo;
let running = false;

function draw() {
  view.width = demo.width();
  view.height = demo.height();
  const pixels = new Uint8ClampedArray(demo.rgba());
  ctx.putImageData(new ImageData(pixels, demo.width(), demo.height()), 0, 0);
}

function showValues() {
  for (const input of [frame, ...dofs]) input.nextElementSibling.value = input.value;
}

function probe() {
  showValues();
  const [common, silOnly, modelOnly, weight] = demo.probe(+frame.value, Float64Array.from(dofs, (d) => +d.value));
  status.textContent = `frame ${frame.value}\ncommon ${common}, silhouette only ${silOnly}, model only ${modelOnly}\nweight ${weight.toFixed(3)}`;
  draw();
}

function snapToTruth() {
  demo.truthValues(+frame.value).forEach((v, i) => (dofs[i].value = Math.round(v)));
  probe();
}

function reset() {
  running = false;
  demo?.free();
  demo = new Demo(+$("seed").value, +$("budget").value, 3);
  frame.max = demo.frameCount() - 1;
  probe();
}

function step() {
  const t0 = performance.now();
  const r = demo.step();
  if (r.length === 0) {
    running = false;
    status.textContent += "\nend of sequence";
    return false;
  }
  const [k, mae, weight, lost, measured] = r;
  const ms = performance.now() - t0;
  status.textContent = `frame ${k} of ${demo.frameCount() - 1}${lost ? " (lost)" : ""}\n` +
    `tracked-dof error ${mae.toFixed(2)} deg, weight ${weight.toFixed(3)}\n` +
    `${measured} poses measured in ${ms.toFixed(0)} ms`;
  draw();
  return true;
}

function run() {
  if (running) return;
  running = true;
  const tick = () => {
    if (running && step()) requestAnimationFrame(tick);
  };
  tick();
}

await init();
reset();
for (const input of [frame, ...dofs]) input.addEventListener("input", probe);
$("truth").addEventListener("click", snapToTruth);
$("step").addEventListener("click", () => { running = false; step(); });
$("run").addEventListener("click", run);
$("reset").addEventListener("click", reset);
$("budget").addEventListener("change", reset);
$("seed").addEventListener("change", reset);
