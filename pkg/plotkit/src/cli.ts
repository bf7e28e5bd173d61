#!/usr/bin/env node
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { renderToFile } from "./render.js";

async function main(): Promise<void> {
  await yargs(hideBin(process.argv))
    .scriptName("plotkit")
    .command(
      "render",
      "render one figure from a plot spec",
      (y) =>
        y.option("spec", {
          type: "string",
          demandOption: true,
          describe: "path to a plot spec JSON file",
        }),
      (argv) => {
        const out = renderToFile(argv.spec);
        process.stdout.write(`wrote ${out}\n`);
      },
    )
    .demandCommand(1, "specify a command, e.g. render --spec fig.json")
    .strict()
    .fail((msg, err) => {
      process.stderr.write(`plotkit: ${err ? err.message : msg}\n`);
      process.exit(1);
    })
    .parseAsync();
}

main().catch((err: Error) => {
  process.stderr.write(`plotkit: ${err.message}\n`);
  process.exit(1);
});
