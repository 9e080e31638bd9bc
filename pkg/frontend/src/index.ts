export { ApiClient, ApiError } from './api';
export { pollJob, JobFailedError } from './poll';
export type { PollOptions } from './poll';
export {
  emptyForm,
  toJobRequest,
  validateForm,
  STYLES,
  LIGHTINGS,
} from './form';
export type { PromptForm } from './form';
export {
  escapeHtml,
  renderCompare,
  renderPaletteView,
  renderSearchGrid,
} from './views';
export type {
  AccentEntry,
  EntrySpec,
  GalleryEntry,
  JobRequestBody,
  JobStatus,
  JobStateName,
  Palette,
  SearchResponse,
} from './types';
