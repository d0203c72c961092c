#!/usr/bin/env node
/** figure-plots CLI.
 *
 *   figure-plots plot --spec spec.json
 *   figure-plots plot --kind latency --input sweep.csv --output latency.svg [--log-y]
 *
 * A spec file carries the same fields as the flags:
 *   { "kind": "...", "input": ["a.csv"], "output": "fig.svg",
 *     "title": "...", "xLabel": "...", "yLabel": "...", "logY": false }
 *
 * Exit codes: 0 written, 1 bad input (missing columns, empty data, bad spec).
 */

import { readFileSync } from "node:fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { FIGURE_KINDS, FigureKind, PlotSpec, render } from "./figures.js";

function specFromFile(path: string): PlotSpec {
    const raw = JSON.parse(readFileSync(path, "utf-8"));
    if (typeof raw.kind !== "string" || typeof raw.output !== "string" || raw.input === undefined) {
        throw new Error(`spec ${path} must define kind, input, and output`);
    }
    return {
        kind: raw.kind as FigureKind,
        input: Array.isArray(raw.input) ? raw.input : [raw.input],
        output: raw.output,
        title: raw.title,
        xLabel: raw.xLabel,
        yLabel: raw.yLabel,
        logY: Boolean(raw.logY),
    };
}

export function main(argv: string[]): number {
    const parser = yargs(argv)
        .command("plot", "render one figure from results CSVs", (y) =>
            y
                .option("spec", { type: "string", describe: "JSON plot spec file" })
                .option("kind", { type: "string", choices: [...FIGURE_KINDS], describe: "figure kind" })
                .option("input", { type: "string", array: true, describe: "results CSV path(s)" })
                .option("output", { type: "string", describe: "output SVG path" })
                .option("title", { type: "string" })
                .option("x-label", { type: "string" })
                .option("y-label", { type: "string" })
                .option("log-y", { type: "boolean", default: false, describe: "log-scale value axis" }),
        )
        .demandCommand(1)
        .strict()
        .exitProcess(false)
        .fail((msg, err) => {
            throw err ?? new Error(msg);
        });

    try {
        const args = parser.parseSync();
        let spec: PlotSpec;
        if (args.spec) {
            spec = specFromFile(String(args.spec));
        } else {
            if (!args.kind || !args.input || !args.output) {
                throw new Error("plot needs either --spec or all of --kind, --input, --output");
            }
            spec = {
                kind: args.kind as FigureKind,
                input: (args.input as string[]).map(String),
                output: String(args.output),
                title: args.title as string | undefined,
                xLabel: args["x-label"] as string | undefined,
                yLabel: args["y-label"] as string | undefined,
                logY: Boolean(args["log-y"]),
            };
        }
        render(spec);
        console.log(`wrote ${spec.output}`);
        return 0;
    } catch (err) {
        console.error(`figure-plots: ${err instanceof Error ? err.message : err}`);
        return 1;
    }
}

const invokedDirectly =
    process.argv[1] !== undefined &&
    (process.argv[1].endsWith("cli.js") || process.argv[1].endsWith("figure-plots"));
if (invokedDirectly) {
    process.exit(main(hideBin(process.argv)));
}
