void drop_data(struct holder *h)
{
    free(h->data); h->data = NULL;
    if (h->data)
        memset(h->data, 0, h->size);
}
