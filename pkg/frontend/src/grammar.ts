/**
 * Client-side validation for the kernel's textual grammars.
 *
 * The kernel CLI is the authority; these parsers only mirror its series
 * and divisor grammars closely enough to reject malformed input before a
 * process is spawned, and to normalize expressions for display.
 */

export class GrammarError extends Error {
  constructor(message: string, readonly pos: number, readonly expected: string[] = []) {
    super(`${message} at position ${pos}${expected.length ? ` (expected one of: ${expected.join(", ")})` : ""}`)
  }
}

type Token = { kind: "num" | "name" | "sym" | "eof"; text: string; pos: number }

const TOKEN = /\s+|(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([-+*/^():,;[\]])/y

export function tokenize(text: string): Token[] {
  const out: Token[] = []
  let pos = 0
  while (pos < text.length) {
    TOKEN.lastIndex = pos
    const m = TOKEN.exec(text)
    if (!m || m.index !== pos) throw new GrammarError(`unexpected character ${JSON.stringify(text[pos])}`, pos)
    if (m[1]) out.push({ kind: "num", text: m[1], pos })
    else if (m[2]) out.push({ kind: "name", text: m[2], pos })
    else if (m[3]) out.push({ kind: "sym", text: m[3], pos })
    pos = TOKEN.lastIndex
  }
  out.push({ kind: "eof", text: "", pos: text.length })
  return out
}

class Cursor {
  at = 0
  constructor(readonly toks: Token[]) {}
  peek(): Token {
    return this.toks[this.at]
  }
  next(): Token {
    return this.toks[this.at++]
  }
  accept(text: string): boolean {
    if (this.peek().text === text) {
      this.at += 1
      return true
    }
    return false
  }
  expect(text: string): Token {
    const t = this.peek()
    if (t.text !== text) throw new GrammarError(`unexpected ${JSON.stringify(t.text || "end of input")}`, t.pos, [text])
    return this.next()
  }
  expectInt(): number {
    let sign = 1
    if (this.accept("-")) sign = -1
    else this.accept("+")
    const t = this.peek()
    if (t.kind !== "num") throw new GrammarError(`unexpected ${JSON.stringify(t.text)}`, t.pos, ["integer"])
    this.next()
    return sign * Number(t.text)
  }
  done(): boolean {
    return this.peek().kind === "eof"
  }
}

export interface SeriesTerm {
  /** numerator/denominator of the scalar factor */
  coeff: [number, number]
  /** exponent per level, level 1 first */
  exps: number[]
}

export interface ParsedSeries {
  depth: number
  terms: SeriesTerm[]
  /** knowledge bound per level (1-based), absent = exact */
  precs: Map<number, number>
}

function varLevel(name: string, pos: number, depth: number): number {
  const m = /^t(\d+)$/.exec(name)
  if (!m) throw new GrammarError(`unknown name ${JSON.stringify(name)}`, pos, ["t<level>"])
  const level = Number(m[1])
  if (level < 1 || level > depth) throw new GrammarError(`variable ${name} is outside depth ${depth}`, pos)
  return level
}

/** Parse a series expression: signed sums of terms plus O-markers. */
export function parseSeries(text: string, depth: number): ParsedSeries {
  const cur = new Cursor(tokenize(text))
  const out: ParsedSeries = { depth, terms: [], precs: new Map() }
  let sign = cur.accept("-") ? -1 : (cur.accept("+"), 1)
  element(cur, depth, sign, out)
  for (;;) {
    if (cur.accept("+")) sign = 1
    else if (cur.accept("-")) sign = -1
    else break
    element(cur, depth, sign, out)
  }
  if (!cur.done()) throw new GrammarError(`trailing input ${JSON.stringify(cur.peek().text)}`, cur.peek().pos)
  return out
}

function element(cur: Cursor, depth: number, sign: number, out: ParsedSeries): void {
  const t = cur.peek()
  if (t.kind === "name" && t.text === "O") {
    cur.next()
    cur.expect("(")
    const v = cur.next()
    const level = varLevel(v.text, v.pos, depth)
    cur.expect("^")
    const exp = cur.expectInt()
    cur.expect(")")
    const prev = out.precs.get(level)
    out.precs.set(level, prev === undefined ? exp : Math.min(prev, exp))
    return
  }
  out.terms.push(term(cur, depth, sign))
}

function term(cur: Cursor, depth: number, sign: number): SeriesTerm {
  let num = sign
  let den = 1
  const exps = new Array(depth).fill(0)
  let saw = false
  for (;;) {
    const t = cur.peek()
    if (t.kind === "num") {
      cur.next()
      num *= Number(t.text)
      if (cur.accept("/")) {
        const d = cur.peek()
        if (d.kind !== "num") throw new GrammarError(`unexpected ${JSON.stringify(d.text)}`, d.pos, ["integer"])
        cur.next()
        den *= Number(d.text)
      }
      saw = true
    } else if (t.kind === "name" && t.text !== "O") {
      const level = varLevel(t.text, t.pos, depth)
      cur.next()
      let exp = 1
      if (cur.accept("^")) exp = cur.expectInt()
      exps[level - 1] += exp
      saw = true
    } else {
      if (!saw) throw new GrammarError(`unexpected ${JSON.stringify(t.text || "end of input")}`, t.pos, ["number", "t<level>"])
      break
    }
    if (cur.accept("*")) continue
    const n = cur.peek()
    if (n.kind === "num" || (n.kind === "name" && n.text !== "O")) continue
    break
  }
  return { coeff: [num, den], exps }
}

/** Reprint a parsed series in the kernel's canonical term order. */
export function printSeries(parsed: ParsedSeries): string {
  const parts: string[] = []
  const sorted = [...parsed.terms].sort((a, b) => {
    for (let i = 0; i < a.exps.length; i++) if (a.exps[i] !== b.exps[i]) return a.exps[i] - b.exps[i]
    return 0
  })
  for (const t of sorted) {
    const factors: string[] = []
    for (let level = t.exps.length; level >= 1; level--) {
      const e = t.exps[level - 1]
      if (e === 0) continue
      factors.push(`t${level}${e !== 1 ? `^${e}` : ""}`)
    }
    const [n, d] = t.coeff
    const coeff = d === 1 ? `${n}` : `${n}/${d}`
    if (factors.length === 0) parts.push(coeff)
    else if (n === 1 && d === 1) parts.push(factors.join("*"))
    else parts.push(`${coeff}*${factors.join("*")}`)
  }
  if (parts.length === 0) parts.push("0")
  for (const [level, prec] of [...parsed.precs.entries()].sort((a, b) => a[0] - b[0])) {
    parts.push(`O(t${level}^${prec})`)
  }
  let out = parts[0]
  for (const part of parts.slice(1)) {
    out += part.startsWith("-") ? ` - ${part.slice(1)}` : ` + ${part}`
  }
  return out
}

export interface DivisorEntry {
  point: string // polynomial text or "inf"
  mult: number
}

/** Parse a divisor literal like `[(t^2+t+1):3, inf:-1]`. */
export function parseDivisor(text: string): DivisorEntry[] {
  const cur = new Cursor(tokenize(text))
  cur.expect("[")
  const entries: DivisorEntry[] = []
  if (!cur.accept("]")) {
    for (;;) {
      const point = parsePoint(cur)
      cur.expect(":")
      const mult = cur.expectInt()
      entries.push({ point, mult })
      if (cur.accept("]")) break
      cur.expect(",")
    }
  }
  if (!cur.done()) throw new GrammarError(`trailing input ${JSON.stringify(cur.peek().text)}`, cur.peek().pos)
  return entries
}

function parsePoint(cur: Cursor): string {
  const t = cur.peek()
  if (t.kind === "name" && t.text === "inf") {
    cur.next()
    return "inf"
  }
  if (cur.accept("(")) {
    const start = cur.peek().pos
    let depthParens = 0
    let end = start
    for (;;) {
      const tok = cur.peek()
      if (tok.kind === "eof") throw new GrammarError("unbalanced parentheses", tok.pos)
      if (tok.text === "(") depthParens += 1
      if (tok.text === ")") {
        if (depthParens === 0) break
        depthParens -= 1
      }
      end = tok.pos + tok.text.length
      cur.next()
    }
    const poly = cur.toks[0] ? textSlice(cur, start, end) : ""
    cur.expect(")")
    if (!/^[0-9t^+\-* ]+$/.test(poly)) throw new GrammarError("malformed polynomial", start)
    return poly
  }
  throw new GrammarError(`unexpected ${JSON.stringify(t.text)}`, t.pos, ["inf", "(poly)"])
}

function textSlice(cur: Cursor, start: number, end: number): string {
  // reconstruct from the token stream to stay whitespace-insensitive
  return cur.toks
    .filter((t) => t.pos >= start && t.pos < end)
    .map((t) => t.text)
    .join("")
}
