import { readFileSync } from "node:fs";
import Papa from "papaparse";

/** One row of the experiment results schema. */
export interface ResultRow {
    experiment_id: string;
    mode: string;
    scheme: string;
    total_beams: number;
    ue_density: number;
    lambda_p: number;
    activation_cycles: number;
    nm_stationary: number;
    nm_low: number;
    nm_high: number;
    seed: string;
    metric: string;
    value: number;
    stderr: number | null;
}

export const REQUIRED_COLUMNS = [
    "experiment_id",
    "mode",
    "scheme",
    "total_beams",
    "ue_density",
    "lambda_p",
    "activation_cycles",
    "nm_stationary",
    "nm_low",
    "nm_high",
    "seed",
    "metric",
    "value",
    "stderr",
] as const;

export class MissingColumnsError extends Error {
    constructor(public readonly path: string, public readonly columns: string[]) {
        super(`${path}: missing required column(s): ${columns.join(", ")}`);
        this.name = "MissingColumnsError";
    }
}

export class EmptyCsvError extends Error {
    constructor(path: string) {
        super(`${path}: no data rows (header only)`);
        this.name = "EmptyCsvError";
    }
}

/** Load a results CSV, skipping leading comment lines and validating columns. */
export function loadResults(path: string): ResultRow[] {
    const raw = readFileSync(path, "utf-8");
    const body = raw
        .split("\n")
        .filter((line) => !line.startsWith("#"))
        .join("\n");
    const parsed = Papa.parse<Record<string, string>>(body, {
        header: true,
        skipEmptyLines: true,
    });
    const fields = parsed.meta.fields ?? [];
    const missing = REQUIRED_COLUMNS.filter((c) => !fields.includes(c));
    if (missing.length > 0) {
        throw new MissingColumnsError(path, [...missing]);
    }
    if (parsed.data.length === 0) {
        throw new EmptyCsvError(path);
    }
    return parsed.data.map((rec) => ({
        experiment_id: rec.experiment_id,
        mode: rec.mode,
        scheme: rec.scheme,
        total_beams: Number(rec.total_beams),
        ue_density: Number(rec.ue_density),
        lambda_p: Number(rec.lambda_p),
        activation_cycles: Number(rec.activation_cycles),
        nm_stationary: Number(rec.nm_stationary),
        nm_low: Number(rec.nm_low),
        nm_high: Number(rec.nm_high),
        seed: rec.seed,
        metric: rec.metric,
        value: Number(rec.value),
        stderr: rec.stderr === "" || rec.stderr === undefined ? null : Number(rec.stderr),
    }));
}

/** Aggregate rows (across-seed means) when present, otherwise whatever exists. */
export function preferAggregates(rows: ResultRow[]): ResultRow[] {
    const agg = rows.filter((r) => r.seed === "mean");
    return agg.length > 0 ? agg : rows;
}
