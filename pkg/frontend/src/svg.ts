/** Minimal deterministic SVG chart primitives: scales, axes, marks.
 *
 * Everything renders to plain strings; identical inputs give identical bytes
 * (fixed styling, no timestamps, stable number formatting).
 */

export interface Margin {
    top: number;
    right: number;
    bottom: number;
    left: number;
}

export const DEFAULT_MARGIN: Margin = { top: 42, right: 24, bottom: 48, left: 64 };
export const WIDTH = 760;
export const HEIGHT = 480;

export const PALETTE = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#8c564b", "#17becf", "#7f7f7f", "#bcbd22", "#e377c2",
];

const FONT = "font-family=\"Helvetica, Arial, sans-serif\"";

export function fmt(v: number): string {
    if (!Number.isFinite(v)) return "0";
    const rounded = Math.round(v * 1000) / 1000;
    return Object.is(rounded, -0) ? "0" : String(rounded);
}

export interface Scale {
    (v: number): number;
    ticks: number[];
}

export function linearScale(lo: number, hi: number, rLo: number, rHi: number): Scale {
    if (hi === lo) {
        hi = lo + 1;
    }
    const f = ((v: number) => rLo + ((v - lo) / (hi - lo)) * (rHi - rLo)) as Scale;
    f.ticks = linearTicks(lo, hi);
    return f;
}

export function logScale(lo: number, hi: number, rLo: number, rHi: number): Scale {
    const safeLo = Math.max(lo, 1e-12);
    const safeHi = Math.max(hi, safeLo * 10);
    const a = Math.log10(safeLo);
    const b = Math.log10(safeHi);
    const f = ((v: number) =>
        rLo + ((Math.log10(Math.max(v, safeLo)) - a) / (b - a)) * (rHi - rLo)) as Scale;
    const ticks: number[] = [];
    for (let e = Math.floor(a); e <= Math.ceil(b); e++) {
        ticks.push(10 ** e);
    }
    f.ticks = ticks;
    return f;
}

function linearTicks(lo: number, hi: number, count = 6): number[] {
    const span = hi - lo;
    const step = niceStep(span / count);
    const first = Math.ceil(lo / step) * step;
    const ticks: number[] = [];
    for (let v = first; v <= hi + step * 1e-9; v += step) {
        ticks.push(Math.round(v / step) * step);
    }
    return ticks;
}

function niceStep(raw: number): number {
    if (raw <= 0) return 1;
    const mag = 10 ** Math.floor(Math.log10(raw));
    const norm = raw / mag;
    const nice = norm < 1.5 ? 1 : norm < 3.5 ? 2 : norm < 7.5 ? 5 : 10;
    return nice * mag;
}

export function extent(values: number[]): [number, number] {
    let lo = Infinity;
    let hi = -Infinity;
    for (const v of values) {
        if (v < lo) lo = v;
        if (v > hi) hi = v;
    }
    if (!Number.isFinite(lo)) return [0, 1];
    return [lo, hi];
}

/** Pad a [lo, hi] extent and include zero for bar-friendly axes. */
export function padded(ext: [number, number], includeZero = false): [number, number] {
    let [lo, hi] = ext;
    if (includeZero) {
        lo = Math.min(lo, 0);
        hi = Math.max(hi, 0);
    }
    const pad = (hi - lo || Math.abs(hi) || 1) * 0.08;
    return [includeZero && lo === 0 ? 0 : lo - pad, hi + pad];
}

export interface ChartFrame {
    body: string[];
    x: Scale;
    y: Scale;
    plotLeft: number;
    plotRight: number;
    plotTop: number;
    plotBottom: number;
}

export interface FrameOptions {
    title: string;
    xLabel: string;
    yLabel: string;
    xDomain: [number, number];
    yDomain: [number, number];
    logY?: boolean;
    xTickValues?: number[];
    xTickLabels?: string[];
}

export function makeFrame(opts: FrameOptions): ChartFrame {
    const m = DEFAULT_MARGIN;
    const left = m.left;
    const right = WIDTH - m.right;
    const top = m.top;
    const bottom = HEIGHT - m.bottom;
    const x = linearScale(opts.xDomain[0], opts.xDomain[1], left, right);
    const y = opts.logY
        ? logScale(opts.yDomain[0], opts.yDomain[1], bottom, top)
        : linearScale(opts.yDomain[0], opts.yDomain[1], bottom, top);
    const body: string[] = [];
    body.push(`<rect x="0" y="0" width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
    body.push(
        `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="16" ${FONT}>${esc(opts.title)}</text>`,
    );
    // axes
    body.push(line(left, bottom, right, bottom, "#333", 1));
    body.push(line(left, top, left, bottom, "#333", 1));
    const xTicks = opts.xTickValues ?? x.ticks;
    const xLabels = opts.xTickLabels ?? xTicks.map(fmt);
    xTicks.forEach((t, i) => {
        const px = x(t);
        body.push(line(px, bottom, px, bottom + 5, "#333", 1));
        body.push(
            `<text x="${fmt(px)}" y="${bottom + 20}" text-anchor="middle" font-size="11" ${FONT}>${esc(xLabels[i])}</text>`,
        );
    });
    for (const t of y.ticks) {
        const py = y(t);
        if (py < top - 1 || py > bottom + 1) continue;
        body.push(line(left - 5, py, left, py, "#333", 1));
        body.push(line(left, py, right, py, "#eee", 1));
        body.push(
            `<text x="${left - 8}" y="${fmt(py + 4)}" text-anchor="end" font-size="11" ${FONT}>${fmt(t)}</text>`,
        );
    }
    body.push(
        `<text x="${(left + right) / 2}" y="${HEIGHT - 10}" text-anchor="middle" font-size="13" ${FONT}>${esc(opts.xLabel)}</text>`,
    );
    body.push(
        `<text x="18" y="${(top + bottom) / 2}" text-anchor="middle" font-size="13" ${FONT} transform="rotate(-90 18 ${(top + bottom) / 2})">${esc(opts.yLabel)}</text>`,
    );
    return { body, x, y, plotLeft: left, plotRight: right, plotTop: top, plotBottom: bottom };
}

export function line(x1: number, y1: number, x2: number, y2: number, stroke: string, width: number): string {
    return `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" stroke="${stroke}" stroke-width="${width}"/>`;
}

export function polyline(points: Array<[number, number]>, stroke: string): string {
    const pts = points.map(([a, b]) => `${fmt(a)},${fmt(b)}`).join(" ");
    return `<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="2"/>`;
}

export function circle(cx: number, cy: number, r: number, fill: string): string {
    return `<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${r}" fill="${fill}"/>`;
}

export function rect(x: number, y: number, w: number, h: number, fill: string): string {
    return `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}"/>`;
}

export function errorBar(cx: number, yLo: number, yHi: number, color: string, cap = 4): string {
    return [
        line(cx, yLo, cx, yHi, color, 1),
        line(cx - cap, yLo, cx + cap, yLo, color, 1),
        line(cx - cap, yHi, cx + cap, yHi, color, 1),
    ].join("");
}

export function legend(entries: Array<{ label: string; color: string; marker?: "line" | "dot" | "box" }>,
                       atX: number, atY: number): string {
    const parts: string[] = [];
    entries.forEach((e, i) => {
        const y = atY + i * 18;
        const marker = e.marker ?? "line";
        if (marker === "line") {
            parts.push(line(atX, y - 4, atX + 22, y - 4, e.color, 2));
        } else if (marker === "dot") {
            parts.push(circle(atX + 11, y - 4, 3.5, e.color));
        } else {
            parts.push(rect(atX, y - 11, 14, 12, e.color));
        }
        parts.push(
            `<text x="${atX + 28}" y="${y}" font-size="12" ${FONT}>${esc(e.label)}</text>`,
        );
    });
    return parts.join("");
}

export function finishSvg(frame: ChartFrame): string {
    return [
        `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
        ...frame.body,
        "</svg>",
        "",
    ].join("\n");
}

function esc(s: string): string {
    return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}
