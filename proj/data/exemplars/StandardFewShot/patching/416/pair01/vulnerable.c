void drop_data(struct holder *h)
{
    free(h->data);
    if (h->data)
        memset(h->data, 0, h->size);
}
