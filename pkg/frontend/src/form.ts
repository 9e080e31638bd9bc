import type { JobRequestBody } from './types';

export const STYLES = ['realistic photo', 'colored flat design'] as const;

export const LIGHTINGS = [
  'natural light',
  'studio light',
  'golden hour',
  'overcast',
] as const;

export interface PromptForm {
  concept: string;
  context: string;
  style: string;
  lighting: string;
  audience: string;
  imageCount: number;
}

export function emptyForm(): PromptForm {
  return {
    concept: '',
    context: '',
    style: STYLES[0],
    lighting: LIGHTINGS[0],
    audience: '',
    imageCount: 50,
  };
}

/** Field-keyed validation errors; empty object means the form is valid. */
export function validateForm(form: PromptForm): Partial<Record<keyof PromptForm, string>> {
  const errors: Partial<Record<keyof PromptForm, string>> = {};
  if (!form.concept.trim()) {
    errors.concept = 'concept must be non-empty';
  }
  if (!Number.isInteger(form.imageCount) || form.imageCount < 1) {
    errors.imageCount = 'image count must be a positive integer';
  }
  return errors;
}

/** Convert a validated form into a job request body. Throws if invalid. */
export function toJobRequest(form: PromptForm, tag = ''): JobRequestBody {
  const errors = validateForm(form);
  const firstError = Object.values(errors)[0];
  if (firstError) throw new Error(firstError);
  return {
    concept: form.concept.trim(),
    context: form.context.trim() || null,
    style: form.style,
    lighting: form.lighting,
    audience: form.audience.trim() || null,
    image_count: form.imageCount,
    tag,
  };
}
