/**
 * Client-side mirror of the service's annotation-index grammar.
 *
 * An index is four underscore-separated decimal fields without leading
 * zeros: page, position and typeface sample are >= 1, the handwritten
 * serial is >= 0. The validator must accept/reject exactly the strings
 * the backend parser does; the fuzz-corpus test pins that equivalence.
 */

export interface IndexParts {
  page: number;
  position: number;
  typefaceSample: number;
  handwrittenSerial: number;
}

export interface ValidationResult {
  ok: boolean;
  error?: string;
  parts?: IndexParts;
}

const FIELD = /^(0|[1-9][0-9]*)$/;

export function validateIndexField(field: string, minimum: 0 | 1): string | null {
  if (!FIELD.test(field)) {
    return `"${field}" is not a decimal integer without leading zeros`;
  }
  // fields can exceed Number.MAX_SAFE_INTEGER textually; the grammar only
  // constrains the digits, so compare against the minimum lexically
  if (minimum === 1 && /^0+$/.test(field)) {
    return "must be at least 1";
  }
  return null;
}

export function validateIndex(value: string): ValidationResult {
  const fields = value.split("_");
  if (fields.length !== 4) {
    return { ok: false, error: `expected 4 underscore-separated fields, got ${fields.length}` };
  }
  const minima: Array<0 | 1> = [1, 1, 1, 0];
  for (let i = 0; i < 4; i++) {
    const problem = validateIndexField(fields[i], minima[i]);
    if (problem !== null) {
      return { ok: false, error: `field ${i + 1}: ${problem}` };
    }
  }
  return {
    ok: true,
    parts: {
      page: Number(fields[0]),
      position: Number(fields[1]),
      typefaceSample: Number(fields[2]),
      handwrittenSerial: Number(fields[3]),
    },
  };
}

export function formatIndex(parts: IndexParts): string {
  return `${parts.page}_${parts.position}_${parts.typefaceSample}_${parts.handwrittenSerial}`;
}
