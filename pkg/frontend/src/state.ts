/** Ordering guard for overlapping snapshot requests.
 *
 * Scrubbing the slider fires requests faster than they resolve and
 * responses can arrive out of order.  Every request takes a ticket;
 * a response may be applied only if no response with a newer ticket
 * has been applied already.
 */

export class ScrubCoordinator {
  private nextTicket = 0;
  private lastApplied = 0;

  begin(): number {
    this.nextTicket += 1;
    return this.nextTicket;
  }

  accept(ticket: number): boolean {
    if (ticket <= this.lastApplied) {
      return false;
    }
    this.lastApplied = ticket;
    return true;
  }
}

export type InstantChoice = number | "Now";

/** Slider positions run over the fixed instants and, when the graph has
 * open intervals, one extra rightmost stop for Now. */
export function sliderStops(
  min: number,
  max: number,
  hasNow: boolean,
): InstantChoice[] {
  const stops: InstantChoice[] = [];
  for (let t = min; t <= max; t++) {
    stops.push(t);
  }
  if (hasNow) {
    stops.push("Now");
  }
  return stops;
}
