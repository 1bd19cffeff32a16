/**
 * Minimal console entry point: forwards a command line to the kernel and
 * prints the payload, after validating any series/divisor arguments.
 */

import { KernelClient } from "./client.js"

export function main(argv: string[]): number {
  const client = new KernelClient({ cwd: process.env.FIELDTOWER_ROOT })
  const { lines, exitCode } = client.runText(argv)
  for (const line of lines) console.log(line)
  return exitCode
}

const isMain = process.argv[1]?.endsWith("index.js") || process.argv[1]?.endsWith("index.ts")
if (isMain) {
  process.exit(main(process.argv.slice(2)))
}
