/** Number formatting that byte-matches the engine's CSV cells.
 *
 * The engine prints six significant digits with trailing zeros kept and a
 * bare trailing point for integral values ("123457."), switching to
 * two-digit exponent notation outside [1e-4, 1e6). Fixture tests pin this
 * against engine-produced strings.
 */

export function sig6(x: number): string {
  if (!Number.isFinite(x)) throw new Error(`cannot format ${x}`);
  const neg = x < 0 || Object.is(x, -0);
  const ax = Math.abs(x);
  if (ax === 0) return (neg ? "-" : "") + "0.00000";

  // toExponential performs the significant-digit rounding, including the
  // carry that can bump the exponent (999999.5 -> 1.00000e+6)
  const [mant, expPart] = ax.toExponential(5).split("e");
  const e = parseInt(expPart, 10);

  if (e < -4 || e >= 6) {
    const eAbs = Math.abs(e);
    const eStr = (eAbs < 10 ? "0" : "") + eAbs;
    return `${neg ? "-" : ""}${mant}e${e < 0 ? "-" : "+"}${eStr}`;
  }
  // rebuild fixed notation from the already-rounded mantissa so the
  // rounding happens exactly once
  return (neg ? "-" : "") + fixedFromMantissa(mant, e);
}

/** Place a 6-digit mantissa string like "4.41431" at decimal exponent e. */
function fixedFromMantissa(mant: string, e: number): string {
  const digits = mant.replace(".", ""); // six digits
  if (e >= 5) return digits + ".";
  if (e >= 0) {
    return digits.slice(0, e + 1) + "." + digits.slice(e + 1);
  }
  return "0." + "0".repeat(-e - 1) + digits;
}

export function boolCell(b: boolean): string {
  return b ? "true" : "false";
}
