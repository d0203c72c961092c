import { writeFileSync } from "node:fs";
import { EmptyCsvError, loadResults, preferAggregates, ResultRow } from "./csv.js";
import {
    circle,
    errorBar,
    extent,
    finishSvg,
    legend,
    makeFrame,
    padded,
    PALETTE,
    polyline,
    rect,
} from "./svg.js";

export const FIGURE_KINDS = [
    "activated_beams",
    "par_count",
    "resources_by_scheme",
    "par_reduction",
    "latency",
] as const;
export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface PlotSpec {
    kind: FigureKind;
    input: string[];
    output: string;
    title?: string;
    xLabel?: string;
    yLabel?: string;
    logY?: boolean;
}

export class MissingMetricError extends Error {
    constructor(metric: string) {
        super(`input carries no rows for metric ${metric}`);
        this.name = "MissingMetricError";
    }
}

/** Render one figure; returns the SVG string that was written. */
export function render(spec: PlotSpec): string {
    if (!FIGURE_KINDS.includes(spec.kind)) {
        throw new Error(`unknown figure kind ${spec.kind}; expected one of ${FIGURE_KINDS.join(", ")}`);
    }
    const rows = spec.input.flatMap((p) => loadResults(p));
    const svg = FIGURES[spec.kind](rows, spec);
    writeFileSync(spec.output, svg);
    return svg;
}

type FigureFn = (rows: ResultRow[], spec: PlotSpec) => string;

const FIGURES: Record<FigureKind, FigureFn> = {
    activated_beams: figureActivatedBeams,
    par_count: figureParCount,
    resources_by_scheme: figureResources,
    par_reduction: figureParReduction,
    latency: figureLatency,
};

function metricRows(rows: ResultRow[], metric: string): ResultRow[] {
    const out = rows.filter((r) => r.metric === metric);
    if (out.length === 0) throw new MissingMetricError(metric);
    return out;
}

function uniqueSorted(values: number[]): number[] {
    return [...new Set(values)].sort((a, b) => a - b);
}

/** Whichever of density / beam count varies is the x axis of sweep figures. */
function sweepAxis(rows: ResultRow[]): { field: "ue_density" | "total_beams"; label: string } {
    const densities = new Set(rows.map((r) => r.ue_density));
    const beams = new Set(rows.map((r) => r.total_beams));
    return beams.size > densities.size
        ? { field: "total_beams", label: "total beams per cell" }
        : { field: "ue_density", label: "users per paging occasion" };
}

function figureActivatedBeams(rows: ResultRow[], spec: PlotSpec): string {
    const analytic = metricRows(rows, "n_bar_analytic");
    const mc = metricRows(rows, "n_bar_mc");
    const lambdas = uniqueSorted(analytic.map((r) => r.ue_density));
    const beams = uniqueSorted(analytic.map((r) => r.total_beams));
    const yAll = [...analytic, ...mc].map((r) => r.value);
    const frame = makeFrame({
        title: spec.title ?? "Average activated beams: model line, simulation markers",
        xLabel: spec.xLabel ?? "users per cell",
        yLabel: spec.yLabel ?? "average activated beams",
        xDomain: padded(extent(lambdas)),
        yDomain: spec.logY ? extent(yAll) : padded(extent(yAll), true),
        logY: spec.logY,
    });
    beams.forEach((b, i) => {
        const color = PALETTE[i % PALETTE.length];
        const linePts = lambdas
            .map((lam) => analytic.find((r) => r.total_beams === b && r.ue_density === lam))
            .filter((r): r is ResultRow => r !== undefined)
            .map((r) => [frame.x(r.ue_density), frame.y(r.value)] as [number, number]);
        frame.body.push(polyline(linePts, color));
        for (const r of mc.filter((r) => r.total_beams === b)) {
            const cx = frame.x(r.ue_density);
            const cy = frame.y(r.value);
            if (r.stderr !== null && r.stderr > 0) {
                frame.body.push(errorBar(cx, frame.y(r.value - 2 * r.stderr), frame.y(r.value + 2 * r.stderr), color));
            }
            frame.body.push(circle(cx, cy, 3.5, color));
        }
    });
    frame.body.push(
        legend(beams.map((b, i) => ({ label: `B = ${b}`, color: PALETTE[i % PALETTE.length] })),
               frame.plotLeft + 12, frame.plotTop + 16),
    );
    return finishSvg(frame);
}

function figureParCount(rows: ResultRow[], spec: PlotSpec): string {
    const data = metricRows(rows, "par_total");
    const lambdas = uniqueSorted(data.map((r) => r.ue_density));
    const beams = uniqueSorted(data.map((r) => r.total_beams));
    const frame = makeFrame({
        title: spec.title ?? "Average presence requests over the activation window",
        xLabel: spec.xLabel ?? "users per cell",
        yLabel: spec.yLabel ?? "average requests per window",
        xDomain: padded(extent(lambdas)),
        yDomain: spec.logY ? extent(data.map((r) => r.value)) : padded(extent(data.map((r) => r.value)), true),
        logY: spec.logY,
    });
    beams.forEach((b, i) => {
        const color = PALETTE[i % PALETTE.length];
        const pts = lambdas
            .map((lam) => data.find((r) => r.total_beams === b && r.ue_density === lam))
            .filter((r): r is ResultRow => r !== undefined)
            .map((r) => [frame.x(r.ue_density), frame.y(r.value)] as [number, number]);
        frame.body.push(polyline(pts, color));
        pts.forEach(([cx, cy]) => frame.body.push(circle(cx, cy, 3, color)));
    });
    frame.body.push(
        legend(beams.map((b, i) => ({ label: `B = ${b}`, color: PALETTE[i % PALETTE.length] })),
               frame.plotLeft + 12, frame.plotTop + 16),
    );
    return finishSvg(frame);
}

function figureResources(rows: ResultRow[], spec: PlotSpec): string {
    const data = preferAggregates(metricRows(rows, "total_units"));
    const axis = sweepAxis(data);
    const groups = uniqueSorted(data.map((r) => r[axis.field]));
    const schemes = [...new Set(data.map((r) => r.scheme))];
    const yExt = spec.logY
        ? extent(data.map((r) => r.value))
        : padded(extent(data.map((r) => r.value)), true);
    const frame = makeFrame({
        title: spec.title ?? "Resource use per paging cycle per cell",
        xLabel: spec.xLabel ?? axis.label,
        yLabel: spec.yLabel ?? "resource units (RB-symbols)",
        xDomain: [-0.5, groups.length - 0.5],
        yDomain: yExt,
        logY: spec.logY,
        xTickValues: groups.map((_, i) => i),
        xTickLabels: groups.map((g) => String(g)),
    });
    const groupWidth = (frame.plotRight - frame.plotLeft) / groups.length;
    const barWidth = (groupWidth * 0.8) / schemes.length;
    const yZero = spec.logY ? frame.plotBottom : frame.y(0);
    groups.forEach((g, gi) => {
        schemes.forEach((scheme, si) => {
            const row = data.find((r) => r[axis.field] === g && r.scheme === scheme);
            if (!row) return;
            const cx = frame.x(gi) - groupWidth * 0.4 + si * barWidth;
            const top = frame.y(row.value);
            frame.body.push(rect(cx, Math.min(top, yZero), barWidth * 0.92, Math.abs(yZero - top),
                                 PALETTE[si % PALETTE.length]));
            if (row.stderr !== null && row.stderr > 0) {
                frame.body.push(errorBar(cx + barWidth * 0.46, frame.y(row.value - 2 * row.stderr),
                                         frame.y(row.value + 2 * row.stderr), "#333", 3));
            }
        });
    });
    frame.body.push(
        legend(schemes.map((s, i) => ({ label: s, color: PALETTE[i % PALETTE.length], marker: "box" as const })),
               frame.plotLeft + 12, frame.plotTop + 16),
    );
    return finishSvg(frame);
}

function figureParReduction(rows: ResultRow[], spec: PlotSpec): string {
    const reduction = rows.filter((r) => r.metric.startsWith("par_reduction_pct_vs_"));
    if (reduction.length === 0) throw new MissingMetricError("par_reduction_pct_vs_<baseline>");
    const baseline = reduction[0].metric.replace("par_reduction_pct_vs_", "");
    const data = preferAggregates(reduction).filter(
        (r) => r.scheme !== baseline && r.scheme !== "legacy",
    );
    return seriesByScheme(data, spec, {
        title: spec.title ?? `Reduction in presence requests vs ${baseline}`,
        yLabel: spec.yLabel ?? "reduction (%)",
    });
}

function figureLatency(rows: ResultRow[], spec: PlotSpec): string {
    const all = preferAggregates(metricRows(rows, "latency_mean_ms"));
    const monitored = all.filter((r) => r.scheme.startsWith("mfep-md"));
    const data = monitored.length > 0 ? monitored : all;
    return seriesByScheme(data, spec, {
        title: spec.title ?? "Average paging latency",
        yLabel: spec.yLabel ?? "latency (ms)",
    });
}

function seriesByScheme(
    data: ResultRow[],
    spec: PlotSpec,
    labels: { title: string; yLabel: string },
): string {
    const axis = sweepAxis(data);
    const xs = uniqueSorted(data.map((r) => r[axis.field]));
    const schemes = [...new Set(data.map((r) => r.scheme))];
    const frame = makeFrame({
        title: labels.title,
        xLabel: spec.xLabel ?? axis.label,
        yLabel: labels.yLabel,
        xDomain: padded(extent(xs)),
        yDomain: spec.logY
            ? extent(data.map((r) => r.value))
            : padded(extent(data.map((r) => r.value)), true),
        logY: spec.logY,
    });
    schemes.forEach((scheme, i) => {
        const color = PALETTE[i % PALETTE.length];
        const series = xs
            .map((x) => data.find((r) => r.scheme === scheme && r[axis.field] === x))
            .filter((r): r is ResultRow => r !== undefined);
        frame.body.push(polyline(series.map((r) => [frame.x(r[axis.field]), frame.y(r.value)]), color));
        for (const r of series) {
            const cx = frame.x(r[axis.field]);
            if (r.stderr !== null && r.stderr > 0) {
                frame.body.push(errorBar(cx, frame.y(r.value - 2 * r.stderr), frame.y(r.value + 2 * r.stderr), color));
            }
            frame.body.push(circle(cx, frame.y(r.value), 3, color));
        }
    });
    frame.body.push(
        legend(schemes.map((s, i) => ({ label: s, color: PALETTE[i % PALETTE.length] })),
               frame.plotLeft + 12, frame.plotTop + 16),
    );
    return finishSvg(frame);
}
